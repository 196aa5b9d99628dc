#include "doctest.h"

#include "grid.hpp"

#include <thetagrade/kwinv.hpp>

#include <algorithm>
#include <set>

using namespace tg;

namespace {

// independent oracle: determinant by cofactor expansion
Scalar cofactor_det(const PrimeField& F, const Mat& A) {
    int n = A.rows;
    if (n == 1) return A(0, 0);
    Scalar s = 0;
    for (int j = 0; j < n; ++j) {
        if (!A(0, j)) continue;
        Mat M(n - 1, n - 1);
        for (int i = 1; i < n; ++i)
            for (int k = 0, c = 0; k < n; ++k)
                if (k != j) M(i - 1, c++) = A(i, k);
        Scalar t = F.mul(A(0, j), cofactor_det(F, M));
        s = j % 2 ? F.sub(s, t) : F.add(s, t);
    }
    return s;
}

// sum of principal k-minors, i.e. (-1)^k c_k
Scalar principal_minor_sum(const PrimeField& F, const Mat& A, int k) {
    int n = A.rows;
    Scalar s = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1u) idx.push_back(i);
        Mat M(k, k);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) M(a, b) = A(idx[a], idx[b]);
        s = F.add(s, cofactor_det(F, M));
    }
    return s;
}

Vec random_vec(const PrimeField& F, int n, Rng& rng) {
    Vec v(n);
    for (auto& x : v) x = F.random(rng);
    return v;
}

struct Pipeline {
    Session s;
    CartanSubspace c;
    LittleWeylReport lw;
};

Pipeline run(const std::string& name) {
    Pipeline p{make_session(grid_scenario(name)), {}, {}};
    p.c = explicit_cartan(p.s.F, p.s.spec, p.s.grading);
    p.lw = little_weyl(p.s, p.c);
    return p;
}

}  // namespace

TEST_CASE("generator degrees") {
    auto deg = [](Family f, int n) { return invariant_family(GroupType::make(f, n)).degrees; };
    CHECK(deg(Family::SL, 3) == std::vector<int>{2, 3});
    CHECK(deg(Family::GL, 3) == std::vector<int>{1, 2, 3});
    CHECK(deg(Family::Sp, 2) == std::vector<int>{2, 4});
    CHECK(deg(Family::SO_odd, 3) == std::vector<int>{2, 4, 6});
    CHECK(deg(Family::SO_even, 3) == std::vector<int>{2, 3, 4});
    CHECK(deg(Family::SO_even, 4) == std::vector<int>{2, 4, 4, 6});
    auto so6 = invariant_family(GroupType::make(Family::SO_even, 3));
    CHECK(so6.coefficient == std::vector<int>{2, 0, 4});
}

TEST_CASE("char-poly coefficients against principal minors") {
    PrimeField F(13);
    Rng rng(4);
    for (int n : {2, 3, 4}) {
        Mat A = random_mat(F, n, n, rng);
        auto cs = char_coefficients(F, affine_matrix(F, A, {}));
        for (int k = 1; k <= n; ++k) {
            Scalar expect = principal_minor_sum(F, A, k);
            if (k % 2) expect = F.neg(expect);
            CHECK(evaluate(F, cs[k - 1], {}) == expect);
        }
    }
}

TEST_CASE("symbolic generators of sl3 and sp4") {
    PrimeField F(13);
    auto sl3 = build_algebra(F, GroupType::make(Family::SL, 3));
    auto fam = invariant_generators(F, sl3);
    REQUIRE(fam.generators.size() == 2);
    CHECK(fam.generators[0].total_degree() == 2);
    CHECK(fam.generators[1].total_degree() == 3);
    Rng rng(8);
    for (int k = 0; k < 20; ++k) {
        Vec x = random_vec(F, sl3.dim(), rng);
        Mat X = sl3.element(x);
        // c_3 = -det, c_2 = sum of principal 2-minors
        CHECK(evaluate(F, fam.generators[1], x) == F.neg(cofactor_det(F, X)));
        CHECK(evaluate(F, fam.generators[0], x) == principal_minor_sum(F, X, 2));
        CHECK(invariant_values(F, fam, X) ==
              std::vector<Scalar>{evaluate(F, fam.generators[0], x), evaluate(F, fam.generators[1], x)});
    }
    auto sp4 = build_algebra(F, GroupType::make(Family::Sp, 2));
    auto fs = invariant_generators(F, sp4);
    CHECK(fs.degrees == std::vector<int>{2, 4});
    for (int k = 0; k < 10; ++k) {
        Vec x = random_vec(F, sp4.dim(), rng);
        auto vals = invariant_values(F, fs, sp4.element(x));
        for (int i = 0; i < fs.size(); ++i) CHECK(evaluate(F, fs.generators[i], x) == vals[i]);
    }
    CHECK(fs.generators[1].total_degree() == 4);
}

TEST_CASE("generators are invariant under unipotent conjugation") {
    PrimeField F(13);
    Rng rng(21);
    for (auto type : {GroupType::make(Family::SL, 3), GroupType::make(Family::Sp, 2),
                      GroupType::make(Family::SO_even, 3), GroupType::make(Family::SO_odd, 2)}) {
        CAPTURE(type.name());
        auto alg = build_algebra(F, type);
        auto torus = diagonal_torus(F, type);
        auto fam = invariant_family(type);
        for (int k = 0; k < 10; ++k) {
            Mat x(type.N, type.N);
            for (auto& rt : torus.roots)
                if (rt.row < rt.col) x = mat_add(F, x, mat_scale(F, rt.vector, F.random(rng)));
            Mat U = exp_nilpotent(F, x);
            CHECK(in_group(F, type, U));
            Mat Y = alg.element(random_vec(F, alg.dim(), rng));
            Mat Z = mat_mul(F, mat_mul(F, U, Y), inverse_or_throw(F, U));
            CHECK(invariant_values(F, fam, Z) == invariant_values(F, fam, Y));
        }
    }
}

TEST_CASE("exponential precondition") {
    PrimeField F(13);
    Mat x(3, 3);
    x(0, 1) = 1;
    x(1, 2) = 1;
    Mat U = exp_nilpotent(F, x);
    CHECK(U(0, 2) == F.inv(2));
    CHECK_THROWS_AS(exp_nilpotent(F, Mat::identity(3)), std::invalid_argument);
}

TEST_CASE("Pfaffian squares to the determinant") {
    PrimeField F(13);
    auto type = GroupType::make(Family::SO_even, 3);
    auto alg = build_algebra(F, type);
    // symbolic Pfaffian alone
    InvariantFamily pf;
    pf.type = type;
    pf.degrees = {3};
    pf.coefficient = {0};
    auto gens = restrict_to(F, pf, alg.basis);
    REQUIRE(gens.size() == 1);
    CHECK(gens[0].total_degree() == 3);
    Mat J = form_matrix(F, type);
    Rng rng(3);
    for (int k = 0; k < 20; ++k) {
        Vec x = random_vec(F, alg.dim(), rng);
        Mat XJ = mat_mul(F, alg.element(x), J);
        Scalar p = evaluate(F, gens[0], x);
        CHECK(F.mul(p, p) == cofactor_det(F, XJ));
        CHECK(pfaffian(F, XJ) == p);
    }
    for (int n : {2, 4}) {
        auto t = GroupType::make(Family::SO_even, n);
        auto a = build_algebra(F, t);
        Mat Jt = form_matrix(F, t);
        for (int k = 0; k < 20; ++k) {
            Mat XJ = mat_mul(F, a.element(random_vec(F, a.dim(), rng)), Jt);
            Scalar p = pfaffian(F, XJ);
            CHECK(F.mul(p, p) == det(F, XJ));
        }
    }
}

TEST_CASE("restrictions to lines") {
    PrimeField F(13);
    auto type = GroupType::make(Family::SL, 3);
    auto fam = invariant_family(type);
    Mat c1 = Mat::diag({9, 3, 1});
    auto R = restrict_to(F, fam, {c1});
    MPoly expect3(1);
    expect3.add_term(F, {3}, 12);
    CHECK(R[1] == expect3);
    // c_2 on the line is s^2 c_2(c1)
    Scalar c2 = F.add(F.add(F.mul(9, 3), F.mul(9, 1)), F.mul(3, 1));
    MPoly expect2(1);
    expect2.add_term(F, {2}, c2);
    CHECK(R[0] == expect2);
    auto Z = restrict_to(F, fam, {});
    for (auto& f : Z) CHECK(f.is_zero());

    // substitution into materialized generators agrees
    auto alg = build_algebra(F, type);
    auto full = invariant_generators(F, alg);
    Vec cc = alg.to_coords(c1);
    std::vector<MPoly> images;
    for (Scalar v : cc) {
        MPoly im(1);
        im.add_term(F, {1}, v);
        images.push_back(im);
    }
    for (int i = 0; i < fam.size(); ++i) CHECK(substitute(F, full.generators[i], images) == R[i]);
}

TEST_CASE("Chevalley restriction on the grid") {
    for (auto& sc : default_suite()) {
        CAPTURE(sc.name);
        Pipeline p = run(sc.name);
        auto fam = p.c.r() ? reduction_subgroup(p.s, p.c, p.lw.flags, p.lw.predicted).family
                           : invariant_family(p.s.type);
        auto rep = chevalley_check(p.s.F, fam, p.c, p.lw.wc, p.lw.pseudo.degrees, sc.seed);
        CHECK(rep.invariant);
        CHECK(rep.independent);
        CHECK(rep.degrees_match);
        // the generators of G itself suffice except for the outer SL(4) case
        auto own = chevalley_check(p.s.F, invariant_family(p.s.type), p.c, p.lw.wc, p.lw.pseudo.degrees, sc.seed);
        CHECK(own.invariant);
        CHECK(own.degrees_match == (sc.name != "sl4-outer-m4"));
    }
    Pipeline p = run("sp6-m3");
    auto rep = chevalley_check(p.s.F, invariant_family(p.s.type), p.c, p.lw.wc, p.lw.pseudo.degrees, 1);
    CHECK(rep.degrees == std::vector<int>{6});
}

TEST_CASE("classical Chevalley for the full diagonal torus") {
    PrimeField F(13);
    auto type = GroupType::make(Family::SL, 3);
    auto torus = diagonal_torus(F, type);
    CartanSubspace t{torus.basis};
    // permutation action of S3 on the torus basis coordinates
    auto alg = build_algebra(F, type);
    std::vector<Mat> acts;
    std::vector<int> perm = {0, 1, 2};
    do {
        Mat P(3, 3);
        for (int i = 0; i < 3; ++i) P(perm[i], i) = 1;
        auto a = action_matrix(F, t, P);
        REQUIRE(a);
        acts.push_back(*a);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(acts.begin(), acts.end());
    LittleWeylGroup w{2, acts};
    auto rep = chevalley_check(F, invariant_family(type), t, w, {2, 3}, 5);
    CHECK(rep.ok());
    // a group that is too large breaks invariance
    LittleWeylGroup bigger{2, {Mat::identity(2), Mat::diag({F.neg(1), 1})}};
    CHECK_FALSE(chevalley_check(F, invariant_family(type), t, bigger, {2, 3}, 5).invariant);
}

TEST_CASE("invariant tuples agree along certified Weyl elements") {
    for (const char* name : {"sl6-m3", "sp4-m4", "so8-m3", "sl4-outer-m4"}) {
        std::string label = name;
        CAPTURE(label);
        Pipeline p = run(name);
        const PrimeField& F = p.s.F;
        auto fam = invariant_family(p.s.type);
        Rng rng(7);
        for (auto& cert : p.lw.certificates) {
            if (cert.kind == Realization::None) continue;
            Mat x(p.s.type.N, p.s.type.N);
            for (auto& b : p.c.basis) x = mat_add(F, x, mat_scale(F, b, F.random(rng)));
            Mat y = mat_mul(F, mat_mul(F, cert.g, x), inverse_or_throw(F, cert.g));
            CHECK(invariant_values(F, fam, y) == invariant_values(F, fam, x));
        }
    }
}

TEST_CASE("explicit and random split Cartan subspaces have the same invariant image") {
    for (const char* name : {"sl3-m3", "sl6-m3", "sp4-m4", "so6-m3"}) {
        std::string label = name;
        CAPTURE(label);
        Session s = make_session(grid_scenario(name));
        const PrimeField& F = s.F;
        auto ce = explicit_cartan(F, s.spec, s.grading);
        auto cb = brute_cartan(F, s.alg, s.grading, s.scenario.seed, 500, true);
        REQUIRE(ce.r() == cb.r());
        for (auto& x : cb.basis) CHECK(mat_pow(F, x, F.p()) == x);
        auto fam = invariant_family(s.type);
        auto image = [&](const CartanSubspace& c) {
            std::set<std::vector<Scalar>> out;
            int r = c.r();
            long long total = 1;
            for (int i = 0; i < r; ++i) total *= F.p();
            for (long long idx = 0; idx < total; ++idx) {
                Mat x(s.type.N, s.type.N);
                long long q = idx;
                for (int i = 0; i < r; ++i) {
                    x = mat_add(F, x, mat_scale(F, c.basis[i], static_cast<Scalar>(q % F.p())));
                    q /= F.p();
                }
                out.insert(invariant_values(F, fam, x));
            }
            return out;
        };
        CHECK(image(ce) == image(cb));
    }
}

TEST_CASE("reduction subgroups") {
    Pipeline a = run("sl6-m3");
    auto sa = reduction_subgroup(a.s, a.c, a.lw.flags, a.lw.predicted);
    CHECK(sa.type.name() == GroupType::make(Family::SL, 6).name());
    CHECK(sa.ok());
    Pipeline b = run("sp6-m3");
    auto sb = reduction_subgroup(b.s, b.c, b.lw.flags, b.lw.predicted);
    CHECK(sb.type.family == Family::Sp);
    CHECK(sb.type.N == 6);
    CHECK(sb.ok());
    Pipeline d = run("so8-m3");
    auto sd = reduction_subgroup(d.s, d.c, d.lw.flags, d.lw.predicted);
    CHECK(sd.type.family == Family::SO_odd);
    CHECK(sd.type.N == 7);
    CHECK(sd.basis.size() == 21);
    CHECK(sd.ok());
    Pipeline e = run("sl4-outer-m4");
    auto se = reduction_subgroup(e.s, e.c, e.lw.flags, e.lw.predicted);
    CHECK(se.type.family == Family::SO_even);
    CHECK(se.type.N == 4);
    CHECK(se.restricted == "2");
    CHECK(se.ok());
}

TEST_CASE("regular nilpotents in normalized position") {
    PrimeField F(13);
    Scalar zeta = root_of_unity(F, 3), xi = root_of_unity(F, 6);
    REQUIRE(F.mul(xi, xi) == zeta);
    auto sl3 = regular_nilpotent(F, "1", GroupType::make(Family::SL, 3), 3, 1, zeta, xi);
    Mat e(3, 3);
    e(0, 1) = e(1, 2) = 1;
    CHECK(sl3.e == e);
    CHECK(sl3.e_in_g1);
    CHECK(sl3.regular());
    CHECK(sl3.grading.dims() == std::vector<int>{2, 3, 3});
    auto h = associated_cocharacter(F, sl3);
    REQUIRE(h);
    CHECK(*h == Mat::diag({2, 0, F.neg(2)}));

    PrimeField G(13);
    auto sl6 = regular_nilpotent(G, "1", GroupType::make(Family::SL, 6), 3, 2, zeta, xi);
    CHECK(sl6.regular());
    auto h6 = associated_cocharacter(G, sl6);
    REQUIRE(h6);
    CHECK(*h6 == Mat::diag({5, 3, 1, G.neg(1), G.neg(3), G.neg(5)}));

    PrimeField P(17);
    Scalar z4 = root_of_unity(P, 4), xi8 = root_of_unity(P, 8);
    if (P.mul(xi8, xi8) != z4) xi8 = P.pow(xi8, 3);
    REQUIRE(P.mul(xi8, xi8) == z4);
    auto sp4 = regular_nilpotent(P, "3I", GroupType::make(Family::Sp, 2), 4, 1, z4, xi8);
    CHECK(sp4.e_in_g1);
    CHECK(sp4.regular());
    auto hs = associated_cocharacter(P, sp4);
    REQUIRE(hs);
    CHECK(*hs == Mat::diag({3, 1, P.neg(1), P.neg(3)}));

    // a non-regular element is detected
    auto bad = sl3;
    bad.e(1, 2) = 0;
    CHECK(static_cast<int>(centralizer_in(F, bad.alg, {bad.e}, all_coords(bad.alg)).size()) > 2);
}

TEST_CASE("section dimensions") {
    Pipeline a = run("sl3-m3");
    auto ka = kw_section(a.s, a.c, a.lw);
    CHECK(ka.section.g1_dim == 3);
    CHECK(ka.section.image_dim == 2);
    CHECK(ka.section.r() == 1);
    Pipeline b = run("sl6-m3");
    auto kb = kw_section(b.s, b.c, b.lw);
    CHECK(kb.section.g1_dim == 12);
    CHECK(kb.section.image_dim == 10);
    CHECK(kb.section.r() == 2);
    CHECK(kb.check.jacobian_at_e);
    CHECK(kb.check.collisions == 0);
    Pipeline z = run("sp2-m3-zero-rank");
    auto kz = kw_section(z.s, z.c, z.lw);
    CHECK(kz.section.r() == 0);
    CHECK(kz.check.ok());
    CHECK(kz.ok());
}

TEST_CASE("KW sections on the grid") {
    for (auto& sc : default_suite()) {
        CAPTURE(sc.name);
        Pipeline p = run(sc.name);
        auto k = kw_section(p.s, p.c, p.lw);
        CHECK(k.sub.ok());
        CHECK(k.sub.dims == k.pos.grading.dims());
        CHECK(k.pos.e_in_g1);
        CHECK(k.pos.regular());
        REQUIRE(k.h);
        CHECK(k.h_bracket);
        CHECK(k.h_fixed);
        CHECK(k.dim_u);
        CHECK(k.fiber_at_e);
        CHECK(k.check.selection);
        CHECK(k.check.jacobian_at_e);
        if (p.c.r()) CHECK(k.check.jacobian_nonsingular >= 95);
        CHECK(k.check.collisions == 0);
        CHECK(k.check.weighted);
        CHECK(k.nilpotent.ok());
        CHECK(k.nilpotent.nonzero > 0);
        CHECK(k.invariance.ok());
        CHECK(k.fiber.ok());
        CHECK(k.chevalley.ok());
        auto a = k.check.degrees, b = p.lw.pseudo.degrees;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
        CHECK(k.ok());
    }
}

TEST_CASE("non-split random Cartan subspaces give a different rational image") {
    Session s = make_session(grid_scenario("sp4-m4"));
    const PrimeField& F = s.F;
    auto ce = explicit_cartan(F, s.spec, s.grading);
    auto cb = brute_cartan(F, s.alg, s.grading, s.scenario.seed, 500);
    REQUIRE(ce.r() == cb.r());
    REQUIRE(mat_pow(F, cb.basis[0], F.p()) != cb.basis[0]);
    auto fam = invariant_family(s.type);
    std::set<std::vector<Scalar>> a, b;
    for (Scalar t = 0; t < F.p(); ++t) {
        a.insert(invariant_values(F, fam, mat_scale(F, ce.basis[0], t)));
        b.insert(invariant_values(F, fam, mat_scale(F, cb.basis[0], t)));
    }
    CHECK(a.size() == b.size());
    CHECK(a != b);
}
