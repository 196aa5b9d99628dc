#include <array>
#include <iostream>
#include <string>

#include <runner.hpp>

using namespace tg;
using namespace tg::app;

namespace {

constexpr std::array<const char*, 12> kTitles = {
    "",
    "little Weyl group labels and orders",
    "Kawanaka identities",
    "grading structure",
    "torus decomposition",
    "Cartan oracle equivalence",
    "fiber dimension",
    "Chevalley restriction",
    "KW section",
    "nilpotent vanishing",
    "G(0)-invariance sampling",
    "pseudoreflection generation",
};

struct Tally {
    int checks = 0;
    int failed = 0;
    std::string first;
};

}  // namespace

int main() {
    auto suite = default_suite();
    auto results = run_suite(suite, {Stage::Grade, Stage::Cartan, Stage::Weyl, Stage::KW}, thread_cap());
    std::array<Tally, 12> tally{};
    for (auto& r : results) {
        if (!r.error.empty()) {
            for (int k = 1; k <= 11; ++k) {
                ++tally[k].failed;
                if (tally[k].first.empty()) tally[k].first = r.name + ": " + r.error;
            }
            continue;
        }
        for (auto& c : r.checks) {
            if (c.criterion < 1 || c.criterion > 11) continue;
            auto& t = tally[c.criterion];
            ++t.checks;
            if (!c.pass) {
                ++t.failed;
                if (t.first.empty()) t.first = r.name + ": " + c.name + " (" + c.witness + ")";
            }
        }
    }
    bool all = true;
    for (int k = 1; k <= 11; ++k) {
        const auto& t = tally[k];
        bool pass = t.failed == 0 && t.checks > 0;
        all = all && pass;
        std::cout << (pass ? "PASS" : "FAIL") << " " << k << " " << kTitles[k] << ": " << t.checks - t.failed
                  << "/" << t.checks << " checks";
        if (!pass) std::cout << "; " << (t.first.empty() ? "no checks ran" : t.first);
        std::cout << "\n";
    }
    return all ? 0 : 1;
}
