#include "doctest.h"

#include <thetagrade/exactlin.hpp>

using namespace tg;

namespace {

// independent trial: smallest prime meeting the predicate, by plain loop
std::uint32_t trial_prime(Family f, int N, int m) {
    for (std::uint32_t p = 3;; ++p) {
        bool prime = true;
        for (std::uint32_t d = 2; d * d <= p; ++d)
            if (p % d == 0) { prime = false; break; }
        if (!prime) continue;
        if ((p - 1) % (2 * m) != 0 || p <= static_cast<std::uint32_t>(2 * N)) continue;
        if (f == Family::SL && p % N == 0) continue;
        return p;
    }
}

int brute_order(std::uint32_t p, std::uint32_t z) {
    std::uint64_t x = z;
    for (int k = 1;; ++k) {
        if (x == 1) return k;
        x = x * z % p;
    }
}

}  // namespace

TEST_CASE("field choice matches a trial search") {
    CHECK(choose_field(Family::SL, 3, 3).p() == trial_prime(Family::SL, 3, 3));
    CHECK(choose_field(Family::SL, 3, 3).p() == 7);
    CHECK(choose_field(Family::SL, 6, 1).p() == 13);
    CHECK(choose_field(Family::Sp, 6, 3).p() == 13);
    for (int N = 2; N <= 16; ++N)
        for (int m = 1; m <= 8; ++m)
            for (auto f : {Family::SL, Family::Sp, Family::SO_odd})
                CHECK(choose_field(f, N, m).p() == trial_prime(f, N, m));
}

TEST_CASE("roots of unity") {
    PrimeField F13(13);
    Scalar z = root_of_unity(F13, 3);
    CHECK(z != 1);
    CHECK(F13.pow(z, 3) == 1);
    CHECK(brute_order(13, z) == 3);
    CHECK(root_of_unity(PrimeField(7), 1) == 1);
    CHECK_THROWS_AS(root_of_unity(F13, 5), MathError);
    for (int d : {1, 2, 3, 4, 6, 12}) CHECK(brute_order(13, root_of_unity(F13, d)) == d);
}

TEST_CASE("cyclotomic polynomials") {
    PrimeField F(13);
    CHECK(cyclotomic_upoly(1, F) == UPoly{12, 1});
    CHECK(cyclotomic_upoly(4, F) == UPoly{1, 0, 1});
    CHECK(cyclotomic_upoly(6, F) == UPoly{1, 12, 1});
    CHECK(to_upoly(cyclotomic_mod_p(6, F)) == UPoly{1, 12, 1});
    CHECK_THROWS_AS(cyclotomic_upoly(13, F), MathError);
    // product over divisors of 12 is x^12 - 1
    UPoly prod = {1};
    for (int d : {1, 2, 3, 4, 6, 12}) prod = upoly_mul(F, prod, cyclotomic_upoly(d, F));
    UPoly target(13, 0);
    target[0] = 12;
    target[12] = 1;
    CHECK(prod == target);
}

TEST_CASE("linear algebra basics") {
    PrimeField F7(7);
    CHECK(is_semisimple(F7, Mat::diag({4, 2, 1})));
    Mat J(3, 3);
    J(0, 1) = 1;
    J(1, 2) = 1;
    CHECK(is_nilpotent(F7, J));
    CHECK_FALSE(is_semisimple(F7, J));
    CHECK(rank(F7, Mat(4, 5)) == 0);
    Mat A(2, 3);
    CHECK_THROWS(mat_mul(F7, A, A));
}

TEST_CASE("kernel, solve and inverse") {
    PrimeField F(13);
    Rng rng(5);
    for (int t = 0; t < 30; ++t) {
        Mat A = random_mat(F, 4, 6, rng);
        auto ker = kernel_basis(F, A);
        CHECK(static_cast<int>(ker.size()) == 6 - rank(F, A));
        for (auto& v : ker) CHECK(mat_vec(F, A, v) == Vec(4, 0));
        CHECK(kernel_basis(F, A) == ker);
        Vec x = {1, 2, 3, 4, 5, 6};
        auto y = solve(F, A, mat_vec(F, A, x));
        REQUIRE(y);
        CHECK(mat_vec(F, A, *y) == mat_vec(F, A, x));
        Mat S = random_mat(F, 5, 5, rng);
        auto Si = inverse(F, S);
        CHECK(Si.has_value() == (det(F, S) != 0));
        if (Si) CHECK(mat_mul(F, S, *Si) == Mat::identity(5));
    }
}

TEST_CASE("minimal polynomial divides characteristic polynomial") {
    PrimeField F(17);
    Rng rng(11);
    for (int t = 0; t < 40; ++t) {
        int n = 1 + static_cast<int>(rng() % 6);
        Mat A = random_mat(F, n, n, rng);
        if (t % 3 == 0) {
            // force repeated eigenvalues
            Mat D = Mat::diag(Vec(n, 3));
            D(0, n - 1) = (n > 1);
            A = D;
        }
        UPoly mu = min_poly(F, A), chi = char_poly(F, A);
        CHECK(upoly_degree(chi) == n);
        CHECK(upoly_divmod(F, chi, mu).second.empty());
        CHECK(upoly_eval_mat(F, chi, A).is_zero());
        CHECK(upoly_eval_mat(F, mu, A).is_zero());
        CHECK(chi[0] == (n % 2 ? F.neg(det(F, A)) : det(F, A)));
    }
}

TEST_CASE("semisimple and nilpotent are exclusive away from zero") {
    PrimeField F(13);
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
        Mat A = random_mat(F, 4, 4, rng);
        if (t % 2) {
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j <= i; ++j) A(i, j) = 0;
        }
        if (!A.is_zero()) CHECK_FALSE((is_semisimple(F, A) && is_nilpotent(F, A)));
        auto [s, n] = jordan_parts(F, A);
        CHECK(mat_add(F, s, n) == A);
        CHECK(is_semisimple(F, s));
        CHECK(is_nilpotent(F, n));
        CHECK(commutator(F, s, n).is_zero());
    }
}

TEST_CASE("polynomial calculus") {
    PrimeField F(13);
    MPoly x = MPoly::variable(2, 0), y = MPoly::variable(2, 1);
    MPoly f = poly_mul(F, poly_mul(F, x, x), y);
    MPoly fx = partial_derivative(F, f, 0);
    for (Scalar a = 0; a < 13; ++a)
        for (Scalar b = 0; b < 13; b += 5) CHECK(evaluate(F, fx, {a, b}) == F.mul(2, F.mul(a, b)));
    CHECK(jacobian_at(F, {x, y}, {0, 0}) == Mat::identity(2));
    CHECK_THROWS_AS(partial_derivative(F, f, 2), std::out_of_range);
    CHECK(poly_sub(F, f, f).is_zero());
}

TEST_CASE("finite differences interpolate the gradient") {
    PrimeField F(31);
    Rng rng(17);
    for (int t = 0; t < 10; ++t) {
        MPoly g(3);
        for (int k = 0; k < 6; ++k) {
            MPoly::Exponent e(3);
            for (auto& c : e) c = static_cast<std::uint16_t>(rng() % 3);
            g.add_term(F, e, F.random_nonzero(rng));
        }
        Vec x(3), v(3);
        for (int i = 0; i < 3; ++i) { x[i] = F.random(rng); v[i] = F.random(rng); }
        Scalar grad = 0;
        for (int i = 0; i < 3; ++i) grad = F.add(grad, F.mul(v[i], evaluate(F, partial_derivative(F, g, i), x)));
        // q(s) = g(x + s v) has degree <= 6; Lagrange-interpolate q'(0) from 7 nodes
        int deg = 7;
        std::vector<Scalar> nodes, vals;
        for (int k = 0; k < deg; ++k) {
            Scalar s = static_cast<Scalar>(k);
            Vec pt(3);
            for (int i = 0; i < 3; ++i) pt[i] = F.add(x[i], F.mul(s, v[i]));
            nodes.push_back(s);
            vals.push_back(evaluate(F, g, pt));
        }
        // derivative at 0 of the interpolant: sum_k vals_k * L_k'(0)
        Scalar d = 0;
        for (int k = 0; k < deg; ++k) {
            Scalar denom = 1;
            for (int j = 0; j < deg; ++j)
                if (j != k) denom = F.mul(denom, F.sub(nodes[k], nodes[j]));
            // L_k'(0) numerator: sum_{i != k} prod_{j != k,i} (0 - nodes_j)
            Scalar num = 0;
            for (int i = 0; i < deg; ++i) {
                if (i == k) continue;
                Scalar pr = 1;
                for (int j = 0; j < deg; ++j)
                    if (j != k && j != i) pr = F.mul(pr, F.neg(nodes[j]));
                num = F.add(num, pr);
            }
            d = F.add(d, F.mul(vals[k], F.div(num, denom)));
        }
        CHECK(d == grad);
    }
}

TEST_CASE("coordinates round trip") {
    PrimeField F(13);
    Rng rng(2);
    std::vector<Vec> basis = {{1, 2, 0, 4}, {0, 1, 5, 5}, {3, 3, 3, 3}};
    Coordinates C(F, basis, 4);
    for (int t = 0; t < 20; ++t) {
        Vec c = {F.random(rng), F.random(rng), F.random(rng)};
        CHECK(C.coords(C.combine(c)) == c);
    }
    CHECK_FALSE(C.try_coords({1, 0, 0, 0}).has_value());
}
