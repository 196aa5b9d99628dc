#include "doctest.h"

#include "grid.hpp"

#include <thetagrade/theta.hpp>

using namespace tg;

namespace {

// dim of the zeta^i eigenspace by the character formula (1/m) sum_k zeta^{-ik} tr(op^k)
int character_dim(const PrimeField& F, const Mat& op, int m, Scalar zeta, int i) {
    Scalar s = 0;
    Mat P = Mat::identity(op.rows);
    for (int k = 0; k < m; ++k) {
        s = F.add(s, F.mul(F.pow(F.inv(zeta), static_cast<std::uint64_t>(i) * k), trace(F, P)));
        P = mat_mul(F, P, op);
    }
    return static_cast<int>(F.div(s, F.from_int(m)));
}

}  // namespace

TEST_CASE("orders of simple automorphisms") {
    PrimeField F(13);
    auto sl3 = GroupType::make(Family::SL, 3);
    auto alg = build_algebra(F, sl3);
    AutomorphismSpec id{sl3, false, Mat::identity(3), 1, std::nullopt};
    Mat op = dtheta_operator(F, id, alg);
    CHECK(op == Mat::identity(8));
    CHECK(order_of(F, op, 12) == 1);
    CHECK(compute_grading(F, op, 1).dims() == std::vector<int>{8});

    AutomorphismSpec rot{sl3, false, lift_weyl(F, sl3, weyl_from_cycles({{3, false}}), Vec(3, 1)), 3,
                         std::nullopt};
    CHECK(order_of(F, dtheta_operator(F, rot, alg), 12) == 3);

    auto sl4 = GroupType::make(Family::SL, 4);
    AutomorphismSpec gam{sl4, true, Mat::identity(4), 2, std::nullopt};
    CHECK(order_of(F, dtheta_operator(F, gam, build_algebra(F, sl4)), 16) == 2);

    auto sp4 = GroupType::make(Family::Sp, 2);
    PrimeField F17(17);
    AutomorphismSpec neg{sp4, false, normal_lift(F17, sp4, weyl_from_cycles({{2, true}}), Vec(2, 1)), 4,
                         std::nullopt};
    CHECK(order_of(F17, dtheta_operator(F17, neg, build_algebra(F17, sp4)), 16) == 4);
    CHECK_THROWS_AS(order_of(F17, Mat::diag({3, 1}), 4), MathError);
}

TEST_CASE("grading dimensions agree with the character formula") {
    for (auto& s : default_suite()) {
        CAPTURE(s.name);
        auto ses = make_session(s);
        for (int i = 0; i < s.m; ++i)
            CHECK(static_cast<int>(ses.grading.piece(i).size()) ==
                  character_dim(ses.F, ses.op, s.m, ses.zeta, i));
        CHECK(ses.grading.total_dim() == ses.alg.dim());
        CHECK(bracket_compatible(ses.F, ses.alg, ses.grading));
        CHECK(is_lie_automorphism(ses.F, ses.alg, ses.op));
        CHECK(preserves_trace_form(ses.F, ses.alg, ses.op));
    }
    CHECK(make_session(grid_scenario("sl3-m3")).grading.dims() == std::vector<int>{2, 3, 3});
    CHECK(make_session(grid_scenario("sl6-m3")).grading.piece(1).size() == 12);
}

TEST_CASE("Kawanaka identities on the grid") {
    for (auto& s : default_suite()) {
        CAPTURE(s.name);
        auto ses = make_session(s);
        auto rep = kawanaka_constants(ses.F, ses.spec, ses.alg, ses.torus, ses.grading);
        CHECK(rep.inverse_pairs);
        CHECK(rep.all_products);
        CHECK(rep.dims_zero_one);
        CHECK(rep.all_exact);
        if (s.name != "sp2-m3-zero-rank") CHECK(rep.all_order_rule);
    }
    auto ses = make_session(grid_scenario("sl3-m3"));
    auto rep = kawanaka_constants(ses.F, ses.spec, ses.alg, ses.torus, ses.grading);
    CHECK(rep.orbits.size() == 2);
    for (auto& o : rep.orbits) CHECK(o.length == 3);
}

TEST_CASE("Kawanaka orbits of the identity and the outer involution") {
    PrimeField F(13);
    auto sl3 = GroupType::make(Family::SL, 3);
    auto alg = build_algebra(F, sl3);
    auto T = diagonal_torus(F, sl3);
    AutomorphismSpec id{sl3, false, Mat::identity(3), 1, std::nullopt};
    auto rep = kawanaka_constants(F, id, alg, T, compute_grading(F, dtheta_operator(F, id, alg), 1));
    for (auto c : rep.constant) CHECK(c == 1);
    CHECK(rep.orbits.size() == 6);

    auto sl4 = GroupType::make(Family::SL, 4);
    auto alg4 = build_algebra(F, sl4);
    AutomorphismSpec gam{sl4, true, Mat::identity(4), 2, std::nullopt};
    auto rep4 = kawanaka_constants(F, gam, alg4, diagonal_torus(F, sl4),
                                   compute_grading(F, dtheta_operator(F, gam, alg4), 2));
    CHECK(rep4.inverse_pairs);
    CHECK(rep4.all_products);
    CHECK(rep4.orbits.size() == 6);
}

TEST_CASE("case classification") {
    CHECK(make_session(grid_scenario("sl6-m3")).case_label == "1");
    CHECK(make_session(grid_scenario("sp6-m3")).case_label == "3III");
    CHECK(make_session(grid_scenario("sp4-m4")).case_label == "3I");
    CHECK(make_session(grid_scenario("so6-m3")).case_label == "2III");
    CHECK(make_session(grid_scenario("sl3-outer-m6")).case_label == "4I");
    CHECK(make_session(grid_scenario("sl4-outer-m4")).case_label == "4III");

    PrimeField F(17);
    auto sp12 = GroupType::make(Family::Sp, 6);
    auto w = weyl_from_cycles({{4, false}, {2, true}});
    AutomorphismSpec mixed{sp12, false, normal_lift(F, sp12, w, Vec(6, 1)), 4, w};
    CHECK_THROWS_AS(classify_case(F, mixed), InvalidSpec);

    auto bad = grid_scenario("sl3-m3");
    bad.case_label = "3I";
    CHECK_THROWS_AS(make_session(bad), InvalidSpec);
    bad = grid_scenario("sl3-m3");
    bad.cycles = {{2, false}};
    CHECK_THROWS_AS(make_session(bad), InvalidSpec);
    bad = grid_scenario("sl3-m3");
    bad.m = 4;
    CHECK_THROWS_AS(make_session(bad), InvalidSpec);
}

TEST_CASE("classification is invariant under Weyl conjugation") {
    for (auto& s : default_suite()) {
        CAPTURE(s.name);
        auto ses = make_session(s);
        auto W = enumerate_weyl(ses.type);
        for (std::size_t k = 0; k < W.size(); k += 1 + W.size() / 6) {
            bool orth = ses.type.family == Family::SO_even && !is_rotation(W[k]);
            if (orth) continue;
            Mat g = lift_weyl(ses.F, ses.type, W[k], Vec(ses.type.n, 1));
            AutomorphismSpec c = ses.spec;
            Mat gi = inverse_or_throw(ses.F, g);
            c.nw = s.outer ? mat_mul(ses.F, mat_mul(ses.F, g, ses.spec.nw), transpose(g))
                           : mat_mul(ses.F, mat_mul(ses.F, g, ses.spec.nw), gi);
            c.w = W[k].compose(ses.w).compose(W[k].inverse());
            CHECK(classify_case(ses.F, c) == ses.case_label);
        }
    }
}

TEST_CASE("Jordan parts and p-th powers respect the grading") {
    for (auto name : {"sl3-m3", "sp4-m4", "so7-m3", "sl4-outer-m4"}) {
        CAPTURE(name);
        auto ses = make_session(grid_scenario(name));
        Rng rng(ses.scenario.seed);
        int m = ses.grading.m;
        for (int t = 0; t < 50; ++t) {
            int i = t % m;
            Mat x = random_in_piece(ses.F, ses.alg, ses.grading, i, rng);
            auto [s, n] = jordan_parts(ses.F, x);
            CHECK(degree_of(ses.F, ses.alg, ses.grading, s) == (s.is_zero() ? 0 : i));
            if (!n.is_zero()) CHECK(degree_of(ses.F, ses.alg, ses.grading, n) == i);
            if (t < 20 && !x.is_zero()) {
                Mat xp = mat_pow(ses.F, x, ses.F.p());
                int target = static_cast<int>((static_cast<long long>(i) * ses.F.p()) % m);
                if (!xp.is_zero()) CHECK(degree_of(ses.F, ses.alg, ses.grading, xp) == target);
            }
        }
    }
}
