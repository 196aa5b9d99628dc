#include "thetagrade/scenario.hpp"

#include <json.hpp>

namespace tg {

using nlohmann::json;

namespace {

Family family_from(const std::string& type, int N) {
    if (type == "SL") return Family::SL;
    if (type == "GL") return Family::GL;
    if (type == "Sp") {
        if (N % 2) throw InvalidSpec("Sp needs an even matrix size");
        return Family::Sp;
    }
    if (type == "SO") return N % 2 ? Family::SO_odd : Family::SO_even;
    throw InvalidSpec("unknown group type '" + type + "'");
}

Scenario from_json(const json& j) {
    if (!j.is_object()) throw InvalidSpec("scenario must be a JSON object");
    Scenario s;
    try {
        s.name = j.value("name", std::string());
        std::string type = j.at("type").get<std::string>();
        s.n = j.at("n").get<int>();
        s.family = family_from(type, s.n);
        s.m = j.at("m").get<int>();
        s.case_label = j.value("case", std::string());
        s.outer = j.value("outer", false);
        s.seed = j.value("seed", std::uint64_t{1});
        if (j.contains("prime")) s.prime = j.at("prime").get<std::uint32_t>();
        if (j.contains("torus")) s.torus = j.at("torus").get<std::vector<int>>();
        s.expect = j.value("expect", std::string());
        for (const auto& c : j.at("cycles")) {
            if (!c.is_array() || c.size() != 2) throw InvalidSpec("cycle entries are [length, sign]");
            int len = c[0].get<int>();
            std::string sg = c[1].get<std::string>();
            if (sg != "+" && sg != "-") throw InvalidSpec("cycle sign must be + or -");
            s.cycles.push_back({len, sg == "-"});
        }
    } catch (const json::exception& e) {
        throw InvalidSpec(std::string("malformed scenario: ") + e.what());
    }
    if (s.n < 2 || s.n > 16) throw InvalidSpec("matrix size must be in [2, 16]");
    if (s.m < 1) throw InvalidSpec("order must be positive");
    return s;
}

const char* type_string(Family f) {
    switch (f) {
        case Family::SL: return "SL";
        case Family::GL: return "GL";
        case Family::Sp: return "Sp";
        default: return "SO";
    }
}

int rank_parameter(Family f, int N) {
    switch (f) {
        case Family::SL:
        case Family::GL: return N;
        case Family::SO_odd: return (N - 1) / 2;
        default: return N / 2;
    }
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw InvalidSpec("scenario is not valid JSON");
    return from_json(j);
}

std::vector<Scenario> parse_suite(const std::string& json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw InvalidSpec("suite is not valid JSON");
    const json& list = j.is_object() ? j.at("scenarios") : j;
    if (!list.is_array()) throw InvalidSpec("suite must be an array of scenarios");
    std::vector<Scenario> out;
    for (const auto& e : list) out.push_back(from_json(e));
    return out;
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["type"] = type_string(s.family);
    j["n"] = s.n;
    j["m"] = s.m;
    if (!s.case_label.empty()) j["case"] = s.case_label;
    json cyc = json::array();
    for (auto [len, neg] : s.cycles) cyc.push_back(json::array({len, neg ? "-" : "+"}));
    j["cycles"] = cyc;
    j["outer"] = s.outer;
    j["seed"] = s.seed;
    if (s.prime) j["prime"] = *s.prime;
    if (!s.torus.empty()) j["torus"] = s.torus;
    if (!s.expect.empty()) j["expect"] = s.expect;
    return j.dump();
}

GroupType group_of(const Scenario& s) {
    try {
        return GroupType::make(s.family, rank_parameter(s.family, s.n));
    } catch (const std::invalid_argument& e) {
        throw InvalidSpec(e.what());
    }
}

Session make_session(const Scenario& s) {
    GroupType type = group_of(s);
    int sum = 0;
    for (auto [len, neg] : s.cycles) {
        if (len < 1) throw InvalidSpec("cycle lengths must be positive");
        if (neg && !has_form(type.family)) throw InvalidSpec("negative cycles only for SO/Sp");
        sum += len;
    }
    if (sum != type.n) throw InvalidSpec("cycle lengths must sum to the rank " + std::to_string(type.n));
    if (!s.torus.empty() && static_cast<int>(s.torus.size()) != type.n)
        throw InvalidSpec("torus part needs one exponent per coordinate");

    std::optional<PrimeField> field;
    if (s.prime) {
        std::uint32_t p = *s.prime;
        if (!is_prime(p) || p < 3) throw InvalidSpec("prime override is not an odd prime");
        if ((p - 1) % (2 * s.m) != 0) throw InvalidSpec("prime override must be 1 mod 2m");
        if (p <= static_cast<std::uint32_t>(2 * type.N)) throw InvalidSpec("prime override must exceed 2N");
        if (type.family == Family::SL && p % type.N == 0) throw InvalidSpec("prime override divides n");
        field.emplace(p);
    } else {
        field.emplace(choose_field(type.family, type.N, s.m));
    }
    const PrimeField& F = *field;

    Session ses{s, F, type, build_algebra(F, type), diagonal_torus(F, type), weyl_from_cycles(s.cycles),
                {}, {}, {}, root_of_unity(F, s.m), root_of_unity(F, 2 * s.m), {}};
    Vec part(type.n, 1);
    for (std::size_t j = 0; j < s.torus.size(); ++j) part[j] = F.pow(ses.xi, ((s.torus[j] % (2 * s.m)) + 2 * s.m) % (2 * s.m));
    bool orth = type.family == Family::SO_even && !s.outer;
    try {
        ses.spec.nw = normal_lift(F, type, ses.w, part, orth);
    } catch (const LiftFeasibility& e) {
        throw InvalidSpec(e.what());
    }
    ses.spec.type = type;
    ses.spec.outer = s.outer;
    ses.spec.m = s.m;
    ses.spec.w = ses.w;
    ses.op = dtheta_operator(F, ses.spec, ses.alg);
    int ord = order_of(F, ses.op, 4 * type.N);
    if (ord != s.m)
        throw InvalidSpec("declared order " + std::to_string(s.m) + " but the automorphism has order " +
                          std::to_string(ord));
    ses.grading = compute_grading(F, ses.op, s.m);
    ses.case_label = classify_case(F, ses.spec);
    if (!s.case_label.empty() && s.case_label != ses.case_label)
        throw InvalidSpec("declared case " + s.case_label + " but the automorphism is of case " + ses.case_label);
    return ses;
}

std::vector<Scenario> default_suite() {
    auto mk = [](std::string name, Family f, int N, int m, std::string label,
                 std::vector<std::pair<int, bool>> cycles, bool outer, std::uint64_t seed,
                 std::string expect, std::vector<int> torus = {}) {
        Scenario s;
        s.name = std::move(name);
        s.family = f;
        s.n = N;
        s.m = m;
        s.case_label = std::move(label);
        s.cycles = std::move(cycles);
        s.outer = outer;
        s.seed = seed;
        s.expect = std::move(expect);
        s.torus = std::move(torus);
        return s;
    };
    return {
        mk("sl3-m3", Family::SL, 3, 3, "1", {{3, false}}, false, 101, "G(3,1,1)"),
        mk("sl6-m3", Family::SL, 6, 3, "1", {{3, false}, {3, false}}, false, 102, "G(3,1,2)"),
        mk("sp6-m3", Family::Sp, 6, 3, "3III", {{3, false}}, false, 103, "G(6,1,1)"),
        mk("sp4-m4", Family::Sp, 4, 4, "3I", {{2, true}}, false, 104, "G(4,1,1)"),
        mk("so5-m4", Family::SO_odd, 5, 4, "2I", {{2, true}}, false, 105, "G(4,1,1)"),
        mk("so7-m3", Family::SO_odd, 7, 3, "2III", {{3, false}}, false, 106, "G(6,1,1)"),
        mk("so6-m3", Family::SO_even, 6, 3, "2III", {{3, false}}, false, 107, "G(6,2,1)"),
        mk("so8-m3", Family::SO_even, 8, 3, "2III", {{3, false}, {1, false}}, false, 108, "G(6,1,1)"),
        mk("sl3-outer-m6", Family::SL, 3, 6, "4I", {{3, false}}, true, 109, "G(3,1,1)"),
        mk("sl4-outer-m4", Family::SL, 4, 4, "4III", {{4, false}}, true, 110, "G(4,2,1)", {1, 1, 1, 1}),
        mk("sp2-m3-zero-rank", Family::Sp, 2, 3, "3III", {{1, false}}, false, 111, "", {1}),
    };
}

}  // namespace tg
