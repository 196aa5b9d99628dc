#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "runner.hpp"

using namespace tg;
using namespace tg::app;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInvalid = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidSpec("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Options {
    std::string scenario;
    std::string suite;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> prime;
    std::string out;
    std::string format = "json";
};

void apply_overrides(Scenario& s, const Options& o) {
    if (o.seed) s.seed = *o.seed;
    if (o.prime) s.prime = *o.prime;
}

int emit(const json& report, const Options& o) {
    std::string text = report.dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(o.out);
        if (!f) {
            std::cerr << "error: cannot write " << o.out << "\n";
            return kInvalid;
        }
        f << text;
    }
    return kOk;
}

void print_failures(const ScenarioResult& r) {
    if (!r.error.empty()) std::cerr << r.name << ": " << r.error << "\n";
    for (auto& c : r.checks)
        if (!c.pass) std::cerr << r.name << ": FAIL " << c.name << (c.witness.empty() ? "" : ": " + c.witness) << "\n";
}

int run_single(const Options& o, Stage stage) {
    if (o.scenario.empty()) {
        std::cerr << "error: --scenario is required\n";
        return kInvalid;
    }
    Scenario s;
    try {
        s = parse_scenario(slurp(o.scenario));
    } catch (const InvalidSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    apply_overrides(s, o);
    ScenarioResult r = run_scenario(s, {stage});
    if (r.invalid) {
        std::cerr << "error: " << r.error << "\n";
        return kInvalid;
    }
    json out = {{"scenario", json::parse(scenario_to_json(s))}, {"ok", r.ok()}};
    for (auto& [k, v] : r.report.items()) out[k] = v;
    if (!r.error.empty()) out["error"] = r.error;
    json checks = json::array();
    for (auto& c : r.checks) {
        json e = {{"criterion", c.criterion}, {"name", c.name}, {"pass", c.pass}};
        if (!c.pass) e["witness"] = c.witness;
        checks.push_back(e);
    }
    out["checks"] = checks;
    print_failures(r);
    int rc = emit(out, o);
    if (rc) return rc;
    return r.ok() ? kOk : kFailed;
}

int run_verify_all(const Options& o) {
    std::vector<Scenario> suite;
    try {
        suite = o.suite.empty() ? default_suite() : parse_suite(slurp(o.suite));
    } catch (const InvalidSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    for (auto& s : suite) apply_overrides(s, o);
    auto t0 = std::chrono::steady_clock::now();
    auto results = run_suite(suite, {Stage::Grade, Stage::Cartan, Stage::Weyl, Stage::KW}, thread_cap());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool invalid = false;
    for (auto& r : results) {
        invalid = invalid || r.invalid;
        print_failures(r);
        std::cerr << (r.ok() ? "ok   " : "FAIL ") << r.name << "\n";
    }
    std::cerr << "elapsed " << secs << " s\n";
    int rc = emit(aggregate(results), o);
    if (rc) return rc;
    if (invalid) return kInvalid;
    return std::all_of(results.begin(), results.end(), [](auto& r) { return r.ok(); }) ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic gradings of classical Lie algebras over prime fields"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub, bool suite) {
        if (suite)
            sub->add_option("--suite", o.suite, "suite file, a JSON array of scenarios (default: built-in grid)");
        else
            sub->add_option("--scenario", o.scenario, "scenario JSON file")->required();
        sub->add_option("--seed", o.seed, "override the scenario seed");
        sub->add_option("--prime", o.prime, "override the field characteristic");
        sub->add_option("--out", o.out, "write the report here instead of stdout");
        sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json"}));
    };
    auto* grade = app.add_subcommand("grade", "field, grading dimensions, bracket and Kawanaka checks");
    auto* cartan = app.add_subcommand("cartan", "Cartan subspace, brute force rank, torus decomposition");
    auto* weyl = app.add_subcommand("weyl", "little Weyl group, certificates and predicted label");
    auto* kw = app.add_subcommand("kw", "subgroup l, regular nilpotent, section e + u and its checks");
    auto* all = app.add_subcommand("verify-all", "every check on every scenario of a suite");
    for (auto* s : {grade, cartan, weyl, kw}) common(s, false);
    common(all, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }
    if (*grade) return run_single(o, Stage::Grade);
    if (*cartan) return run_single(o, Stage::Cartan);
    if (*weyl) return run_single(o, Stage::Weyl);
    if (*kw) return run_single(o, Stage::KW);
    return run_verify_all(o);
}
