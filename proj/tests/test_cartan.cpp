#include "doctest.h"

#include "grid.hpp"

#include <thetagrade/cartan.hpp>

using namespace tg;

namespace {

// multiplicity of zeta for (+-w) on the Weyl coordinates, trace zero for SL
int weyl_eigen_count(const Session& s) {
    const PrimeField& F = s.F;
    int n = s.w.degree();
    Scalar eps = s.spec.outer ? F.neg(1) : 1;
    bool sl = s.type.family == Family::SL;
    Mat A(n + (sl ? 1 : 0), n);
    for (int j = 0; j < n; ++j) {
        Scalar v = s.w.sign[j] < 0 ? F.neg(eps) : eps;
        A(s.w.perm[j], j) = F.add(A(s.w.perm[j], j), v);
        A(j, j) = F.sub(A(j, j), s.zeta);
    }
    if (sl)
        for (int j = 0; j < n; ++j) A(n, j) = 1;
    return static_cast<int>(kernel_basis(F, A).size());
}

int centralizer_dim(const Session& s, const std::vector<Mat>& S) {
    return static_cast<int>(centralizer_in(s.F, s.alg, S, all_coords(s.alg)).size());
}

}  // namespace

TEST_CASE("centralizers and centers") {
    PrimeField F(13);
    auto sl3 = build_algebra(F, GroupType::make(Family::SL, 3));
    auto gl3 = build_algebra(F, GroupType::make(Family::GL, 3));
    auto sp4 = build_algebra(F, GroupType::make(Family::Sp, 2));
    CHECK(center_of(F, sl3).empty());
    CHECK(center_of(F, gl3).size() == 1);
    CHECK(center_of(F, sp4).empty());
    Mat h = Mat::diag({1, 2, F.neg(3)});
    CHECK(centralizer_in(F, sl3, {h}, all_coords(sl3)).size() == 2);
    CHECK(centralizer_in(F, gl3, {h}, all_coords(gl3)).size() == 3);
    Mat sub = Mat::diag({1, 1, F.neg(2)});
    CHECK(centralizer_in(F, sl3, {sub}, all_coords(sl3)).size() == 4);
    CHECK(centralizer_in(F, sl3, {}, all_coords(sl3)).size() == 8);
    Mat ad = ad_matrix(F, sl3, h);
    CHECK(rank(F, ad) == 6);
}

TEST_CASE("explicit Cartan subspaces on the grid") {
    for (auto& sc : default_suite()) {
        CAPTURE(sc.name);
        Session s = make_session(sc);
        auto c = explicit_cartan(s.F, s.spec, s.grading);
        CHECK(c.r() == weyl_eigen_count(s));
        auto chk = check_cartan(s.F, s.alg, s.grading, c, sc.seed);
        CHECK(chk.in_g1);
        CHECK(chk.commuting);
        CHECK(chk.semisimple);
        CHECK(chk.maximal);
    }
}

TEST_CASE("explicit ranks and the sl6 element") {
    Session s = make_session(grid_scenario("sl3-m3"));
    CHECK(explicit_cartan(s.F, s.spec, s.grading).r() == 1);
    Session z = make_session(grid_scenario("sp2-m3-zero-rank"));
    CHECK(explicit_cartan(z.F, z.spec, z.grading).r() == 0);

    Session t = make_session(grid_scenario("sl6-m3"));
    auto c = explicit_cartan(t.F, t.spec, t.grading);
    REQUIRE(c.r() == 2);
    const PrimeField& F = t.F;
    Scalar zt = t.zeta;
    Mat c1 = Mat::diag({F.mul(zt, zt), zt, 1, 0, 0, 0});
    auto span = coords_of(t.alg, c.basis);
    CHECK(in_span(F, span, t.alg.to_coords(c1)));
    CHECK(dtheta_apply(F, t.spec, c1) == mat_scale(F, c1, zt));
}

TEST_CASE("random search agrees with the explicit rank") {
    for (const char* name : {"sl3-m3", "sl6-m3", "sp4-m4", "so6-m3", "sp2-m3-zero-rank"}) {
        CAPTURE(name);
        Session s = make_session(grid_scenario(name));
        auto b = brute_cartan(s.F, s.alg, s.grading, s.scenario.seed, 500);
        CHECK(b.r() == explicit_cartan(s.F, s.spec, s.grading).r());
        CHECK(check_cartan(s.F, s.alg, s.grading, b, s.scenario.seed + 1).ok());
    }
}

TEST_CASE("a non-maximal family is rejected") {
    Session s = make_session(grid_scenario("sl6-m3"));
    auto c = explicit_cartan(s.F, s.spec, s.grading);
    CartanSubspace half{{c.basis[0]}};
    auto chk = check_cartan(s.F, s.alg, s.grading, half, 5);
    CHECK(chk.in_g1);
    CHECK(chk.semisimple);
    CHECK_FALSE(chk.maximal);
    CartanSubspace none;
    CHECK_FALSE(check_cartan(s.F, s.alg, s.grading, none, 5).maximal);
}

TEST_CASE("fitting decomposition of g(1)") {
    for (auto& sc : default_suite()) {
        CAPTURE(sc.name);
        Session s = make_session(sc);
        auto c = explicit_cartan(s.F, s.spec, s.grading);
        auto fp = fitting(s.F, s.alg, s.grading, c.basis, sc.seed);
        int d1 = static_cast<int>(s.grading.piece(1).size());
        CHECK(static_cast<int>(fp.zero_part.size() + fp.one_part.size()) == d1);
        auto z = centralizer_in(s.F, s.alg, c.basis, s.grading.piece(1));
        CHECK(fp.zero_part == echelon_basis(s.F, z, s.alg.dim()));
        for (auto& v : coords_of(s.alg, c.basis)) CHECK(in_span(s.F, fp.zero_part, v));
        auto both = fp.zero_part;
        both.insert(both.end(), fp.one_part.begin(), fp.one_part.end());
        CHECK(span_dim(s.F, both, s.alg.dim()) == d1);
    }
}

TEST_CASE("torus decomposition by cyclotomic factors") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(3) == 2);
    CHECK(euler_phi(4) == 2);
    CHECK(euler_phi(6) == 2);
    CHECK(euler_phi(12) == 4);
    Session s = make_session(grid_scenario("sl6-m3"));
    auto td = torus_decomposition(s.F, s.alg, s.torus.basis, s.op, s.grading);
    CHECK(td.torus_dim == 5);
    CHECK(td.dim_of(1) == 4);
    CHECK(td.dim_of(3) == 1);
    for (auto& sc : default_suite()) {
        CAPTURE(sc.name);
        Session t = make_session(sc);
        auto d = torus_decomposition(t.F, t.alg, t.torus.basis, t.op, t.grading);
        CHECK(d.spans);
        for (auto& p : d.pieces) CHECK(p.matches_grading);
        int r = explicit_cartan(t.F, t.spec, t.grading).r();
        CHECK(d.dim_of(1) == r * euler_phi(sc.m));
    }
}

TEST_CASE("elements in general position") {
    Session s = make_session(grid_scenario("sl6-m3"));
    auto c = explicit_cartan(s.F, s.spec, s.grading);
    Mat x = general_position(s.F, s.alg, c, 17);
    int base = centralizer_dim(s, c.basis);
    CHECK(centralizer_dim(s, {x}) == base);
    CHECK(centralizer_dim(s, {c.basis[0]}) > base);
    CHECK(centralizer_dim(s, {c.basis[1]}) > base);
    CHECK_THROWS_AS(general_position(s.F, s.alg, CartanSubspace{}, 1), std::invalid_argument);

    Session t = make_session(grid_scenario("sl3-m3"));
    auto c3 = explicit_cartan(t.F, t.spec, t.grading);
    CHECK(centralizer_dim(t, {general_position(t.F, t.alg, c3, 3)}) == 2);
}

TEST_CASE("zero rank detection") {
    Session z = make_session(grid_scenario("sp2-m3-zero-rank"));
    auto rep = zero_rank_check(z.F, z.alg, z.grading, 9);
    CHECK(rep.samples == 200);
    CHECK(rep.zero_rank());
    CHECK(rep.central_dim == 0);
    Session s = make_session(grid_scenario("sl3-m3"));
    auto r3 = zero_rank_check(s.F, s.alg, s.grading, 9);
    CHECK_FALSE(r3.zero_rank());
    CHECK(r3.nilpotent < r3.samples);
}
