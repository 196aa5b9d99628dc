#include "thetagrade/cartan.hpp"

#include <numeric>

namespace tg {

Mat ad_matrix(const PrimeField& F, const AlgebraBasis& alg, const Mat& x) {
    int d = alg.dim();
    Mat A(d, d);
    for (int k = 0; k < d; ++k) {
        Vec c = alg.to_coords(commutator(F, x, alg.basis[k]));
        for (int i = 0; i < d; ++i) A(i, k) = c[i];
    }
    return A;
}

std::vector<Vec> all_coords(const AlgebraBasis& alg) {
    std::vector<Vec> out;
    for (int k = 0; k < alg.dim(); ++k) {
        Vec v(alg.dim(), 0);
        v[k] = 1;
        out.push_back(v);
    }
    return out;
}

std::vector<Vec> coords_of(const AlgebraBasis& alg, const std::vector<Mat>& mats) {
    std::vector<Vec> out;
    for (auto& X : mats) out.push_back(alg.to_coords(X));
    return out;
}

std::vector<Vec> centralizer_in(const PrimeField& F, const AlgebraBasis& alg, const std::vector<Mat>& S,
                                const std::vector<Vec>& target) {
    int k = static_cast<int>(target.size());
    if (S.empty() || k == 0) return echelon_basis(F, target, alg.dim());
    int N = alg.type.N;
    std::vector<Mat> tm;
    for (auto& v : target) tm.push_back(alg.element(v));
    Mat A(static_cast<int>(S.size()) * N * N, k);
    for (std::size_t s = 0; s < S.size(); ++s)
        for (int j = 0; j < k; ++j) {
            Mat b = commutator(F, tm[j], S[s]);
            for (int e = 0; e < N * N; ++e) A(static_cast<int>(s) * N * N + e, j) = b.a[e];
        }
    std::vector<Vec> out;
    for (auto& a : kernel_basis(F, A)) {
        Vec y(alg.dim(), 0);
        for (int j = 0; j < k; ++j)
            if (a[j])
                for (int i = 0; i < alg.dim(); ++i) y[i] = F.add(y[i], F.mul(a[j], target[j][i]));
        out.push_back(y);
    }
    return echelon_basis(F, out, alg.dim());
}

std::vector<Vec> center_of(const PrimeField& F, const AlgebraBasis& alg) {
    return centralizer_in(F, alg, alg.basis, all_coords(alg));
}

namespace {

Mat combine_mats(const PrimeField& F, const std::vector<Mat>& mats, const Vec& c) {
    Mat X(mats.front().rows, mats.front().cols);
    for (std::size_t i = 0; i < mats.size(); ++i)
        if (c[i]) X = mat_add(F, X, mat_scale(F, mats[i], c[i]));
    return X;
}

Vec random_vec(const PrimeField& F, int n, Rng& rng) {
    Vec v(n);
    for (auto& x : v) x = F.random(rng);
    return v;
}

Vec combine_coords(const PrimeField& F, const std::vector<Vec>& basis, const Vec& a, int d) {
    Vec y(d, 0);
    for (std::size_t j = 0; j < basis.size(); ++j)
        if (a[j])
            for (int i = 0; i < d; ++i) y[i] = F.add(y[i], F.mul(a[j], basis[j][i]));
    return y;
}

}  // namespace

CartanCheck check_cartan(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr,
                         const CartanSubspace& c, std::uint64_t seed) {
    CartanCheck out;
    const auto& g1 = gr.piece(1);
    out.in_g1 = true;
    out.semisimple = true;
    out.commuting = true;
    for (auto& x : c.basis) {
        auto v = alg.try_coords(x);
        if (!v || !in_span(F, g1, *v)) out.in_g1 = false;
        if (!is_semisimple(F, x)) out.semisimple = false;
    }
    for (std::size_t i = 0; i < c.basis.size(); ++i)
        for (std::size_t j = i + 1; j < c.basis.size(); ++j)
            if (!commutator(F, c.basis[i], c.basis[j]).is_zero()) out.commuting = false;
    // semisimple parts of z_{g(1)}(c) lie in c + z(g)
    auto Z = centralizer_in(F, alg, c.basis, g1);
    auto allowed = coords_of(alg, c.basis);
    for (auto& z : center_of(F, alg)) allowed.push_back(z);
    out.maximal = true;
    Rng rng(seed);
    std::vector<Vec> probes = Z;
    for (int t = 0; t < 20 && !Z.empty(); ++t)
        probes.push_back(combine_coords(F, Z, random_vec(F, static_cast<int>(Z.size()), rng), alg.dim()));
    for (auto& y : probes) {
        Mat s = jordan_parts(F, alg.element(y)).first;
        if (!in_span(F, allowed, alg.to_coords(s))) { out.maximal = false; break; }
    }
    return out;
}

CartanSubspace explicit_cartan(const PrimeField& F, const AutomorphismSpec& spec, const Grading& gr) {
    if (!spec.w) throw InvalidSpec("explicit Cartan subspace needs the Weyl element of the automorphism");
    const WeylElement& w = *spec.w;
    const GroupType& t = spec.type;
    Scalar step = spec.outer ? F.inv(F.neg(gr.zeta)) : F.inv(gr.zeta);
    std::vector<Mat> blocks;
    std::vector<bool> seen(w.degree(), false);
    for (int s = 0; s < w.degree(); ++s) {
        if (seen[s]) continue;
        std::vector<Scalar> x(w.degree(), 0);
        int j = s;
        Scalar cur = step;
        do {
            seen[j] = true;
            x[j] = cur;
            // x_{w(j)} = step * sign(j) * x_j
            Scalar nxt = F.mul(step, cur);
            if (w.sign[j] < 0) nxt = F.neg(nxt);
            j = w.perm[j];
            cur = nxt;
        } while (j != s);
        if (cur != x[s]) continue;  // cycle carries no eigenvector
        Mat c(t.N, t.N);
        for (int k = 0; k < w.degree(); ++k) {
            if (!x[k]) continue;
            c(k, k) = x[k];
            if (has_form(t.family)) c(t.N - 1 - k, t.N - 1 - k) = F.neg(x[k]);
        }
        blocks.push_back(c);
    }
    CartanSubspace out;
    if (t.family == Family::SL && !blocks.empty()) {
        // restrict to trace zero combinations
        Mat tr(1, static_cast<int>(blocks.size()));
        for (std::size_t i = 0; i < blocks.size(); ++i) tr(0, static_cast<int>(i)) = trace(F, blocks[i]);
        if (tr.is_zero()) {
            out.basis = blocks;
        } else {
            for (auto& a : kernel_basis(F, tr)) out.basis.push_back(combine_mats(F, blocks, a));
        }
    } else {
        out.basis = blocks;
    }
    for (auto& c : out.basis)
        if (dtheta_apply(F, spec, c) != mat_scale(F, c, gr.zeta))
            throw MathError("explicit Cartan element is not in g(1)");
    return out;
}

CartanSubspace brute_cartan(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr,
                            std::uint64_t seed, int budget, bool split) {
    Rng rng(seed);
    CartanSubspace c;
    std::vector<Vec> span;
    int fails = 0;
    const auto& g1 = gr.piece(1);
    std::vector<Vec> Z = g1;
    while (fails < budget && !Z.empty()) {
        Vec y = combine_coords(F, Z, random_vec(F, static_cast<int>(Z.size()), rng), alg.dim());
        Mat s = jordan_parts(F, alg.element(y)).first;
        Vec sv = alg.to_coords(s);
        if (s.is_zero() || in_span(F, span, sv) || (split && mat_pow(F, s, F.p()) != s)) {
            ++fails;
            continue;
        }
        c.basis.push_back(s);
        span.push_back(sv);
        fails = 0;
        Z = centralizer_in(F, alg, c.basis, g1);
    }
    return c;
}

FittingPair fitting(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr,
                    const std::vector<Mat>& h, std::uint64_t seed) {
    FittingPair out;
    int d = alg.dim();
    const auto& g1 = gr.piece(1);
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = i + 1; j < h.size(); ++j)
            if (!commutator(F, h[i], h[j]).is_zero()) throw MathError("fitting needs a commuting family");
    if (h.empty()) {
        out.zero_part = g1;
        out.generic = Mat(alg.type.N, alg.type.N);
        return out;
    }
    // joint generalized null space of ad h
    std::vector<Vec> joint = all_coords(alg);
    for (auto& x : h) joint = intersect(F, joint, kernel_basis(F, mat_pow(F, ad_matrix(F, alg, x), d)), d);
    Rng rng(seed);
    for (int t = 0; t < 100; ++t) {
        Mat x = combine_mats(F, h, random_vec(F, static_cast<int>(h.size()), rng));
        Mat A = mat_pow(F, ad_matrix(F, alg, x), d);
        auto ker = kernel_basis(F, A);
        if (ker.size() != joint.size()) continue;
        std::vector<Vec> img;
        for (int k = 0; k < d; ++k) {
            Vec col(d);
            for (int i = 0; i < d; ++i) col[i] = A(i, k);
            img.push_back(col);
        }
        out.zero_part = intersect(F, ker, g1, d);
        out.one_part = intersect(F, echelon_basis(F, img, d), g1, d);
        out.generic = x;
        return out;
    }
    throw MathError("no generic element found in 100 samples");
}

int euler_phi(int n) {
    int r = 0;
    for (int k = 1; k <= n; ++k)
        if (std::gcd(k, n) == 1) ++r;
    return r;
}

int TorusLieDecomposition::dim_of(int d) const {
    for (auto& p : pieces)
        if (p.d == d) return static_cast<int>(p.basis.size());
    return 0;
}

TorusLieDecomposition torus_decomposition(const PrimeField& F, const AlgebraBasis& alg,
                                          const std::vector<Mat>& torus_basis, const Mat& op,
                                          const Grading& gr) {
    int d = alg.dim(), m = gr.m;
    auto tc = coords_of(alg, torus_basis);
    int k = static_cast<int>(tc.size());
    Coordinates tcoord(F, tc, d);
    Mat R(k, k);
    for (int j = 0; j < k; ++j) {
        auto c = tcoord.try_coords(mat_vec(F, op, tc[j]));
        if (!c) throw MathError("automorphism does not stabilize the torus");
        for (int i = 0; i < k; ++i) R(i, j) = (*c)[i];
    }
    TorusLieDecomposition out;
    out.torus_dim = k;
    int total = 0;
    for (int dv = 1; dv <= m; ++dv) {
        if (m % dv) continue;
        TorusPiece piece;
        piece.d = dv;
        Mat P = upoly_eval_mat(F, cyclotomic_upoly(m / dv, F), R);
        for (auto& a : kernel_basis(F, P)) piece.basis.push_back(tcoord.combine(a));
        piece.basis = echelon_basis(F, piece.basis, d);
        // compare with the sum of t(i) over gcd(i, m) = d
        std::vector<Vec> sum;
        for (int i = 0; i < m; ++i)
            if (std::gcd(i, m) == dv)
                for (auto& v : intersect(F, tc, gr.pieces[i], d)) sum.push_back(v);
        auto sb = echelon_basis(F, sum, d);
        piece.matches_grading = sb == piece.basis;
        total += static_cast<int>(piece.basis.size());
        out.pieces.push_back(std::move(piece));
    }
    out.spans = total == k;
    return out;
}

Mat general_position(const PrimeField& F, const AlgebraBasis& alg, const CartanSubspace& c,
                     std::uint64_t seed) {
    if (c.basis.empty()) throw std::invalid_argument("general position needs r >= 1");
    auto all = all_coords(alg);
    int target = static_cast<int>(centralizer_in(F, alg, c.basis, all).size());
    Rng rng(seed);
    for (int t = 0; t < 200; ++t) {
        Vec a(c.r());
        for (auto& x : a) x = F.random_nonzero(rng);
        Mat x = combine_mats(F, c.basis, a);
        if (static_cast<int>(centralizer_in(F, alg, {x}, all).size()) == target) return x;
    }
    throw MathError("no element in general position within 200 samples");
}

ZeroRankReport zero_rank_check(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr,
                               std::uint64_t seed, int samples) {
    ZeroRankReport rep;
    int d = alg.dim();
    const auto& g1 = gr.piece(1);
    auto center = center_of(F, alg);
    auto s = intersect(F, g1, center, d);
    rep.central_dim = static_cast<int>(s.size());
    // g(1) intersected with the derived algebra
    std::vector<Vec> derived;
    if (alg.type.family == Family::GL) {
        Mat tr(1, d);
        for (int k = 0; k < d; ++k) tr(0, k) = trace(F, alg.basis[k]);
        derived = kernel_basis(F, tr);
    } else {
        derived = all_coords(alg);
    }
    auto D = intersect(F, g1, derived, d);
    // complement of s inside D
    std::vector<Vec> comp, acc = s;
    for (auto& v : D) {
        auto trial = acc;
        trial.push_back(v);
        if (span_dim(F, trial, d) > span_dim(F, acc, d)) {
            acc.push_back(v);
            comp.push_back(v);
        }
    }
    Rng rng(seed);
    rep.samples = samples;
    for (int t = 0; t < samples; ++t) {
        if (comp.empty()) {
            ++rep.nilpotent;
            continue;
        }
        Vec y = combine_coords(F, comp, random_vec(F, static_cast<int>(comp.size()), rng), d);
        if (is_nilpotent(F, alg.element(y))) ++rep.nilpotent;
    }
    return rep;
}

}  // namespace tg
