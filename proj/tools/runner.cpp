#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace tg::app {

namespace {

void add(std::vector<Check>& out, int criterion, std::string name, bool pass, std::string witness = {}) {
    if (!pass && witness.empty()) witness = "violated";
    out.push_back({criterion, std::move(name), pass, pass ? std::string() : std::move(witness)});
}

std::string join(const std::vector<int>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return "[" + os.str() + "]";
}

json label_json(const std::optional<GmqrLabel>& l) {
    if (!l) return nullptr;
    return l->str();
}

json diag_json(const Mat& h, std::uint32_t p) {
    json out = json::array();
    for (int i = 0; i < h.rows; ++i) {
        long long v = h(i, i);
        out.push_back(v > p / 2 ? v - static_cast<long long>(p) : v);
    }
    return out;
}

}  // namespace

json matrix_json(const Mat& a) {
    json out = json::array();
    for (int i = 0; i < a.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < a.cols; ++j) row.push_back(a(i, j));
        out.push_back(row);
    }
    return out;
}

bool ScenarioResult::ok() const {
    return !invalid && error.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

StageResult grade_stage(const Session& s) {
    const PrimeField& F = s.F;
    StageResult out;
    auto& j = out.report;
    j["group"] = s.type.name();
    j["m"] = s.scenario.m;
    j["case"] = s.case_label;
    j["outer"] = s.spec.outer;
    j["dims"] = s.grading.dims();
    j["dim_g"] = s.alg.dim();
    j["lift"] = matrix_json(s.spec.nw);

    bool sum = s.grading.total_dim() == s.alg.dim();
    bool bracket = bracket_compatible(F, s.alg, s.grading);
    j["bracket_compatible"] = bracket;
    add(out.checks, 3, "grading dimensions sum to dim g", sum,
        std::to_string(s.grading.total_dim()) + " != " + std::to_string(s.alg.dim()));
    add(out.checks, 3, "[g(i), g(j)] in g(i+j)", bracket, "bracket leaves the graded pieces");
    add(out.checks, 0, "automorphism of the Lie algebra", is_lie_automorphism(F, s.alg, s.op));

    auto kw = kawanaka_constants(F, s.spec, s.alg, s.torus, s.grading);
    json orbits = json::array();
    std::string order_witness, exact_witness;
    for (std::size_t k = 0; k < kw.orbits.size(); ++k) {
        const auto& o = kw.orbits[k];
        orbits.push_back({{"length", o.length}, {"product", o.product}, {"order", o.order},
                          {"dim_in_g1", o.dim_in_g1}});
        std::string desc = "orbit " + std::to_string(k) + ": l=" + std::to_string(o.length) +
                           " C=" + std::to_string(o.product) + " ord " + std::to_string(o.order) +
                           " dim " + std::to_string(o.dim_in_g1);
        if (!o.order_rule && order_witness.empty()) order_witness = desc;
        if (!o.exact_rule && exact_witness.empty()) exact_witness = desc;
    }
    j["kawanaka"] = {{"orbits", orbits},
                     {"inverse_pairs", kw.inverse_pairs},
                     {"orbit_products", kw.all_products},
                     {"order_rule", kw.all_order_rule},
                     {"exact_rule", kw.all_exact}};
    add(out.checks, 2, "c(a) c(-a) = 1", kw.inverse_pairs, "inverse pair violated");
    add(out.checks, 2, "C(a)^(m/l) = 1", kw.all_products, "orbit product is not a root of unity of order m/l");
    add(out.checks, 2, "dim of orbit space in g(1) is 0 or 1", kw.dims_zero_one, "orbit meets g(1) in dim > 1");
    add(out.checks, 2, "dim 1 iff ord C = m/l", kw.all_order_rule, order_witness);
    add(out.checks, 0, "dim 1 iff C = zeta^l", kw.all_exact, exact_witness);
    return out;
}

StageResult cartan_stage(const Session& s, const CartanSubspace& c) {
    const PrimeField& F = s.F;
    StageResult out;
    auto& j = out.report;
    int r = c.r();
    j["r"] = r;
    json basis = json::array();
    for (auto& b : c.basis) basis.push_back(matrix_json(b));
    j["basis"] = basis;

    auto chk = check_cartan(F, s.alg, s.grading, c, s.scenario.seed);
    j["cartan_check"] = {{"in_g1", chk.in_g1}, {"commuting", chk.commuting},
                         {"semisimple", chk.semisimple}, {"maximal", chk.maximal}};
    add(out.checks, 5, "explicit subspace is a Cartan subspace", chk.ok(), "check_cartan failed");

    auto brute = brute_cartan(F, s.alg, s.grading, s.scenario.seed, 500);
    j["brute_r"] = brute.r();
    add(out.checks, 5, "brute force rank equals explicit rank", brute.r() == r,
        "brute " + std::to_string(brute.r()) + " explicit " + std::to_string(r));
    if (r == 0) {
        auto z = zero_rank_check(F, s.alg, s.grading, s.scenario.seed);
        j["zero_rank"] = {{"central_dim", z.central_dim}, {"samples", z.samples}, {"nilpotent", z.nilpotent}};
        add(out.checks, 5, "zero rank: complement of the center is nilpotent", z.zero_rank(),
            std::to_string(z.nilpotent) + "/" + std::to_string(z.samples) + " nilpotent");
    }

    auto td = torus_decomposition(F, s.alg, s.torus.basis, s.op, s.grading);
    json pieces = json::array();
    bool matches = true;
    for (auto& p : td.pieces) {
        pieces.push_back({{"d", p.d}, {"dim", p.basis.size()}, {"matches_grading", p.matches_grading}});
        matches = matches && p.matches_grading;
    }
    int expected = r * euler_phi(s.scenario.m);
    j["torus"] = {{"dim", td.torus_dim}, {"pieces", pieces}, {"spans", td.spans}};
    add(out.checks, 4, "torus pieces span t", td.spans, "kernels of cyclotomic factors miss t");
    add(out.checks, 4, "each piece is the sum of its graded parts", matches, "piece differs from graded sum");
    add(out.checks, 4, "dim piece_1 = r phi(m)", td.dim_of(1) == expected,
        std::to_string(td.dim_of(1)) + " != " + std::to_string(expected));
    return out;
}

StageResult weyl_stage(const Session& s, const LittleWeylReport& lw) {
    StageResult out;
    auto& j = out.report;
    j["w_theta_order"] = lw.w_theta_order;
    j["w1"] = {{"label", label_json(lw.label_w1)}, {"order", lw.w1.order()}};
    j["wc_center"] = {{"label", label_json(lw.label_wz)}, {"order", lw.wz.order()}};
    j["wc"] = {{"label", label_json(lw.label)}, {"order", lw.wc.order()}};
    j["predicted"] = lw.predicted.str();
    j["ambient_m"] = lw.ambient_m;
    j["flags"] = {{"mult_one", lw.flags.mult_one}, {"mult_minus_one", lw.flags.mult_minus_one},
                  {"s0", lw.flags.s0}, {"outer_minus", lw.flags.outer_minus}};
    int fixed = 0, central = 0;
    for (auto& c : lw.certificates) {
        fixed += c.kind == Realization::Fixed;
        central += c.kind == Realization::Central;
    }
    j["certificates"] = {{"fixed", fixed}, {"central", central}};
    j["pseudoreflections"] = {{"count", lw.pseudo.pseudoreflections.size()},
                              {"degrees", lw.pseudo.degrees},
                              {"generated", lw.pseudo.generated_by_them}};
    bool match = lw.matches_prediction();
    j["verdict"] = match ? "MATCH" : "MISMATCH";

    std::string got = lw.label ? lw.label->str() : "unidentified";
    add(out.checks, 1, "W_c equals the predicted label", match, got + " vs " + lw.predicted.str());
    if (!s.scenario.expect.empty())
        add(out.checks, 1, "W_c equals the expected label", lw.label && lw.label->str() == s.scenario.expect,
            got + " vs " + s.scenario.expect);
    add(out.checks, 1, "|W_c| = m'^r r!/q", lw.order_formula,
        "order " + std::to_string(lw.wc.order()) + " for " + got);
    add(out.checks, 0, "W_c in W_c^Z in W_1, all closed", lw.chain_ok);
    add(out.checks, 11, "W_c generated by pseudoreflections", lw.pseudo.generated_by_them,
        std::to_string(lw.pseudo.pseudoreflections.size()) + " pseudoreflections");
    add(out.checks, 11, "product of degrees = |W_c|", lw.pseudo.degree_product == lw.wc.order(),
        std::to_string(lw.pseudo.degree_product) + " != " + std::to_string(lw.wc.order()));
    return out;
}

StageResult kw_stage(const Session& s, const CartanSubspace& c, const LittleWeylReport& lw) {
    const PrimeField& F = s.F;
    StageResult out;
    auto& j = out.report;
    auto kw = kw_section(s, c, lw);
    const auto& sub = kw.sub;
    const auto& ck = kw.check;
    int r = c.r();
    j["subgroup"] = {{"type", sub.type.name()}, {"restricted_case", sub.restricted},
                     {"dim", sub.basis.size()}, {"dims", sub.dims},
                     {"degrees", sub.family.degrees}};
    j["normalized"] = {{"case", kw.pos.case_label}, {"dims", kw.pos.grading.dims()},
                       {"centralizer_dim", kw.pos.centralizer_dim}};
    j["e"] = matrix_json(kw.pos.e);
    j["h"] = kw.h ? diag_json(*kw.h, F.p()) : json(nullptr);
    j["section"] = {{"dim_u", kw.section.r()}, {"weights", kw.section.weights},
                    {"image_dim", kw.section.image_dim}, {"g1_dim", kw.section.g1_dim},
                    {"degrees", ck.degrees}, {"jacobian_points", ck.jacobian_points},
                    {"jacobian_nonsingular", ck.jacobian_nonsingular}, {"samples", ck.samples},
                    {"distinct_points", ck.distinct_points}, {"collisions", ck.collisions}};
    j["nilpotent"] = {{"samples", kw.nilpotent.samples}, {"nonzero", kw.nilpotent.nonzero}};
    j["invariance"] = {{"conjugations", kw.invariance.conjugations}, {"nontrivial", kw.invariance.nontrivial}};
    j["fiber"] = {{"expected", kw.fiber.expected}, {"samples", kw.fiber.samples},
                  {"matching", kw.fiber.matching}};
    j["chevalley"] = {{"degrees", kw.chevalley.degrees}, {"invariant", kw.chevalley.invariant},
                      {"independent", kw.chevalley.independent}};

    bool case_match = !kw.pos.case_label.empty() && !sub.restricted.empty() &&
                      kw.pos.case_label[0] == sub.restricted[0];
    add(out.checks, 8, "subgroup l contains c, theta-stable, closed, right dimension", sub.ok(),
        "contains " + std::to_string(sub.contains_c) + " stable " + std::to_string(sub.theta_stable) +
            " closed " + std::to_string(sub.closed) + " dim " + std::to_string(sub.dim_ok));
    add(out.checks, 8, "graded dims of l match the normalized position",
        sub.dims == kw.pos.grading.dims() && case_match,
        join(sub.dims) + " vs " + join(kw.pos.grading.dims()) + ", case " + kw.pos.case_label);
    add(out.checks, 8, "e regular", kw.pos.regular(),
        "dim z(e) " + std::to_string(kw.pos.centralizer_dim) + " rank " +
            std::to_string(kw.pos.spec.type.torus_dim()));
    add(out.checks, 8, "e in g(1)", kw.pos.e_in_g1);
    add(out.checks, 8, "[h, e] = 2e", kw.h && kw.h_bracket, kw.h ? "bracket differs" : "no h found");
    add(out.checks, 8, "theta fixes h", kw.h_fixed);
    add(out.checks, 8, "dim u = r", kw.dim_u, std::to_string(kw.section.r()) + " != " + std::to_string(r));
    add(out.checks, 8, "restricted invariants selected with the expected degrees", ck.selection && ck.weighted,
        "degrees " + join(ck.degrees));
    add(out.checks, 8, "Jacobian nonsingular at e", ck.jacobian_at_e);
    add(out.checks, 8, "Jacobian nonsingular at >= 95/100 points",
        ck.jacobian_points == 0 || ck.jacobian_nonsingular * 100 >= 95 * ck.jacobian_points,
        std::to_string(ck.jacobian_nonsingular) + "/" + std::to_string(ck.jacobian_points));
    std::string coll = std::to_string(ck.collisions) + " collisions";
    if (ck.witness) {
        coll += " at";
        for (Scalar v : *ck.witness) coll += " " + std::to_string(v);
    }
    add(out.checks, 8, "no collisions among section samples", ck.collisions == 0, coll);
    add(out.checks, 6, "dim [g(0), e] = dim g(1) - r", kw.fiber_at_e,
        std::to_string(kw.section.image_dim) + " vs " + std::to_string(kw.section.g1_dim - r));
    add(out.checks, 6, "orbit dimension at general position samples", kw.fiber.ok(),
        std::to_string(kw.fiber.matching) + "/" + std::to_string(kw.fiber.samples));
    add(out.checks, 7, "restrictions are W_c-invariant", kw.chevalley.invariant);
    add(out.checks, 7, "r restrictions with Jacobian rank r", kw.chevalley.independent);
    add(out.checks, 7, "restricted degrees equal the pseudoreflection degrees", kw.chevalley.degrees_match,
        join(kw.chevalley.degrees) + " vs " + join(lw.pseudo.degrees));
    add(out.checks, 9, "invariants vanish on nilpotent samples", kw.nilpotent.ok() && kw.nilpotent.samples == 100,
        std::to_string(kw.nilpotent.samples) + " samples, nilpotent " +
            std::to_string(kw.nilpotent.all_nilpotent));
    add(out.checks, 10, "invariants constant under G(0) conjugation",
        kw.invariance.ok() && kw.invariance.conjugations == 50,
        std::to_string(kw.invariance.conjugations) + " conjugations, fixed " +
            std::to_string(kw.invariance.fixed));
    return out;
}

ScenarioResult run_scenario(const Scenario& sc, const std::vector<Stage>& stages) {
    ScenarioResult res;
    res.name = sc.name;
    auto wants = [&](Stage st) { return std::find(stages.begin(), stages.end(), st) != stages.end(); };
    auto absorb = [&](const char* key, StageResult st) {
        res.report[key] = std::move(st.report);
        for (auto& c : st.checks) res.checks.push_back(std::move(c));
    };
    std::optional<Session> s;
    try {
        s.emplace(make_session(sc));
    } catch (const InvalidSpec& e) {
        res.invalid = true;
        res.error = e.what();
        return res;
    }
    res.report["field"] = {{"p", s->F.p()}, {"zeta", s->zeta}, {"xi", s->xi}};
    try {
        if (wants(Stage::Grade)) absorb("grade", grade_stage(*s));
        if (!wants(Stage::Cartan) && !wants(Stage::Weyl) && !wants(Stage::KW)) return res;
        auto c = explicit_cartan(s->F, s->spec, s->grading);
        if (wants(Stage::Cartan)) absorb("cartan", cartan_stage(*s, c));
        if (!wants(Stage::Weyl) && !wants(Stage::KW)) return res;
        auto lw = little_weyl(*s, c);
        if (wants(Stage::Weyl)) absorb("weyl", weyl_stage(*s, lw));
        if (wants(Stage::KW)) absorb("kw", kw_stage(*s, c, lw));
    } catch (const InvalidSpec& e) {
        res.invalid = true;
        res.error = e.what();
    } catch (const std::exception& e) {
        res.error = e.what();
    }
    return res;
}

ScenarioResult run_all_stages(const Scenario& sc) {
    return run_scenario(sc, {Stage::Grade, Stage::Cartan, Stage::Weyl, Stage::KW});
}

int thread_cap() {
    int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("THETA_GRADE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, hw));
    }
    return hw;
}

std::vector<ScenarioResult> run_suite(const std::vector<Scenario>& suite, const std::vector<Stage>& stages,
                                      int threads) {
    std::vector<ScenarioResult> out(suite.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < suite.size();) out[i] = run_scenario(suite[i], stages);
    };
    int n = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(1, suite.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

json aggregate(const std::vector<ScenarioResult>& results) {
    json list = json::array();
    int failed = 0;
    for (const auto& r : results) {
        json checks = json::array();
        for (const auto& c : r.checks) {
            json e = {{"criterion", c.criterion}, {"name", c.name}, {"pass", c.pass}};
            if (!c.pass) e["witness"] = c.witness;
            checks.push_back(e);
        }
        json entry = {{"name", r.name}, {"ok", r.ok()}, {"checks", checks}, {"report", r.report}};
        if (!r.error.empty()) entry["error"] = r.error;
        failed += !r.ok();
        list.push_back(entry);
    }
    return {{"scenarios", list}, {"failed", failed}, {"ok", failed == 0}};
}

}  // namespace tg::app
