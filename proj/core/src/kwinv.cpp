#include "thetagrade/kwinv.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace tg {

namespace {

MPoly mono(int nv, int var, Scalar c, const PrimeField& F) {
    MPoly f(nv);
    MPoly::Exponent e(nv, 0);
    if (var >= 0) e[var] = 1;
    f.add_term(F, e, c);
    return f;
}

PolyMat poly_mat_mul(const PrimeField& F, const PolyMat& A, const PolyMat& B) {
    int n = static_cast<int>(A.size());
    int nv = A[0][0].nvars();
    PolyMat C(n, std::vector<MPoly>(n, MPoly(nv)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (A[i][j].is_zero()) continue;
            for (int k = 0; k < n; ++k) {
                if (B[j][k].is_zero()) continue;
                C[i][k] = poly_add(F, C[i][k], poly_mul(F, A[i][j], B[j][k]));
            }
        }
    return C;
}

PolyMat poly_mat_times(const PrimeField& F, const PolyMat& A, const Mat& B) {
    int n = static_cast<int>(A.size());
    int nv = A[0][0].nvars();
    PolyMat C(n, std::vector<MPoly>(n, MPoly(nv)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (A[i][j].is_zero()) continue;
            for (int k = 0; k < n; ++k)
                if (B(j, k)) C[i][k] = poly_add(F, C[i][k], poly_scale(F, A[i][j], B(j, k)));
        }
    return C;
}

MPoly poly_trace(const PrimeField& F, const PolyMat& A) {
    MPoly t(A[0][0].nvars());
    for (std::size_t i = 0; i < A.size(); ++i) t = poly_add(F, t, A[i][i]);
    return t;
}

std::vector<MPoly> family_polys(const PrimeField& F, const InvariantFamily& fam, const PolyMat& X) {
    bool need_char = false, need_pf = false;
    for (int k : fam.coefficient) (k ? need_char : need_pf) = true;
    std::vector<MPoly> cs;
    if (need_char) cs = char_coefficients(F, X);
    MPoly pf;
    if (need_pf) {
        PolyMat Y = poly_mat_times(F, X, fam.right.rows ? fam.right : form_matrix(F, fam.type));
        if (!fam.support.empty()) {
            PolyMat Z;
            for (int i : fam.support) {
                Z.emplace_back();
                for (int j : fam.support) Z.back().push_back(Y[i][j]);
            }
            Y = Z;
        }
        pf = pfaffian(F, Y);
    }
    std::vector<MPoly> out;
    for (int k : fam.coefficient) out.push_back(k ? cs[k - 1] : pf);
    return out;
}

std::vector<Vec> derived(const PrimeField& F, const AlgebraBasis& alg, const std::vector<Vec>& vs) {
    std::vector<Mat> mats;
    for (auto& v : vs) mats.push_back(alg.element(v));
    std::vector<Vec> out;
    for (std::size_t i = 0; i < mats.size(); ++i)
        for (std::size_t j = i + 1; j < mats.size(); ++j) {
            Mat z = commutator(F, mats[i], mats[j]);
            if (!z.is_zero()) out.push_back(alg.to_coords(z));
        }
    return echelon_basis(F, out, alg.dim());
}

// coordinates of {X in g : phi(X) = X}
template <class Phi>
std::vector<Vec> fixed_space(const PrimeField& F, const AlgebraBasis& alg, Phi phi) {
    int N = alg.type.N, d = alg.dim();
    Mat M(N * N, d);
    for (int k = 0; k < d; ++k) {
        Vec v = flatten(mat_sub(F, phi(alg.basis[k]), alg.basis[k]));
        for (int i = 0; i < N * N; ++i) M(i, k) = v[i];
    }
    return kernel_basis(F, M);
}

std::vector<Mat> as_mats(const AlgebraBasis& alg, const std::vector<Vec>& vs) {
    std::vector<Mat> out;
    for (auto& v : vs) out.push_back(alg.element(v));
    return out;
}

Mat combination(const PrimeField& F, const std::vector<Mat>& mats, int N, Rng& rng) {
    Mat x(N, N);
    for (auto& b : mats) x = mat_add(F, x, mat_scale(F, b, F.random(rng)));
    return x;
}

// coordinates of the ad h eigenspace of weight w inside span(target)
std::vector<Vec> weight_space(const PrimeField& F, const Mat& adh, const std::vector<Vec>& target, int w) {
    int d = adh.rows;
    Mat A = adh;
    Scalar s = F.from_int(w);
    for (int i = 0; i < d; ++i) A(i, i) = F.sub(A(i, i), s);
    return intersect(F, target, kernel_basis(F, A), d);
}

// distinct integer ad h weights, ascending; h diagonal with small integer entries
std::vector<int> integer_weights(const PrimeField& F, const Mat& h) {
    std::vector<int> ws{0};
    for (int i = 0; i < h.rows; ++i)
        for (int j = 0; j < h.rows; ++j)
            ws.push_back(static_cast<int>(F.centered(h(i, i)) - F.centered(h(j, j))));
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    for (std::size_t a = 0; a + 1 < ws.size(); ++a)
        for (std::size_t b = a + 1; b < ws.size(); ++b)
            if ((ws[b] - ws[a]) % static_cast<int>(F.p()) == 0) throw MathError("ad h weights collide modulo p");
    return ws;
}

// scalar multiple of g with determinant one
Mat unimodular(const PrimeField& F, const Mat& g) {
    Scalar want = F.inv(det(F, g));
    for (Scalar l = 1; l < F.p(); ++l)
        if (F.pow(l, g.rows) == want) return mat_scale(F, g, l);
    throw MathError("no scalar multiple of determinant one over this field");
}

}  // namespace

PolyMat affine_matrix(const PrimeField& F, const Mat& base, const std::vector<Mat>& dirs) {
    int nv = static_cast<int>(dirs.size());
    int n = base.rows;
    PolyMat A(n, std::vector<MPoly>(n, MPoly(nv)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            MPoly::Exponent e(nv, 0);
            if (base(i, j)) A[i][j].add_term(F, e, base(i, j));
            for (int k = 0; k < nv; ++k)
                if (dirs[k](i, j)) {
                    MPoly::Exponent ek(nv, 0);
                    ek[k] = 1;
                    A[i][j].add_term(F, ek, dirs[k](i, j));
                }
        }
    return A;
}

std::vector<MPoly> char_coefficients(const PrimeField& F, const PolyMat& A) {
    int N = static_cast<int>(A.size());
    if (N >= static_cast<int>(F.p())) throw std::invalid_argument("matrix size must be below p");
    int nv = A[0][0].nvars();
    // power sums and Newton identities
    std::vector<MPoly> p(N + 1, MPoly(nv));
    PolyMat P = A;
    p[1] = poly_trace(F, P);
    for (int k = 2; k <= N; ++k) {
        P = poly_mat_mul(F, P, A);
        p[k] = poly_trace(F, P);
    }
    std::vector<MPoly> e(N + 1, MPoly(nv));
    e[0] = MPoly::constant(nv, 1);
    for (int k = 1; k <= N; ++k) {
        MPoly acc(nv);
        for (int i = 1; i <= k; ++i) {
            MPoly t = poly_mul(F, e[k - i], p[i]);
            acc = i % 2 ? poly_add(F, acc, t) : poly_sub(F, acc, t);
        }
        e[k] = poly_scale(F, acc, F.inv(static_cast<Scalar>(k)));
    }
    std::vector<MPoly> c;
    for (int k = 1; k <= N; ++k) c.push_back(k % 2 ? poly_scale(F, e[k], F.neg(1)) : e[k]);
    return c;
}

MPoly pfaffian(const PrimeField& F, const PolyMat& A) {
    int N = static_cast<int>(A.size());
    int nv = A.empty() ? 0 : A[0][0].nvars();
    if (N % 2) return MPoly(nv);
    if (N > 24) throw std::invalid_argument("Pfaffian size cap exceeded");
    std::unordered_map<std::uint32_t, MPoly> memo;
    auto rec = [&](auto&& self, std::uint32_t mask) -> MPoly {
        if (!mask) return MPoly::constant(nv, 1);
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        int i = __builtin_ctz(mask);
        std::uint32_t rest = mask & ~(1u << i);
        MPoly acc(nv);
        int k = 0;
        for (int j = i + 1; j < N; ++j) {
            if (!(rest >> j & 1u)) continue;
            ++k;
            if (A[i][j].is_zero()) continue;
            MPoly t = poly_mul(F, A[i][j], self(self, rest & ~(1u << j)));
            acc = k % 2 ? poly_add(F, acc, t) : poly_sub(F, acc, t);
        }
        memo.emplace(mask, acc);
        return acc;
    };
    return rec(rec, N == 32 ? ~0u : (1u << N) - 1);
}

Scalar pfaffian(const PrimeField& F, Mat A) {
    int n = A.rows;
    if (n % 2) return 0;
    Scalar res = 1;
    for (int k = 0; k + 1 < n; k += 2) {
        int piv = -1;
        for (int j = k + 1; j < n; ++j)
            if (A(k, j)) { piv = j; break; }
        if (piv < 0) return 0;
        if (piv != k + 1) {
            for (int j = 0; j < n; ++j) std::swap(A(piv, j), A(k + 1, j));
            for (int i = 0; i < n; ++i) std::swap(A(i, piv), A(i, k + 1));
            res = F.neg(res);
        }
        Scalar a = A(k, k + 1);
        res = F.mul(res, a);
        for (int j = k + 2; j < n; ++j) {
            Scalar f = F.div(A(k, j), a);
            if (f) {
                for (int i = 0; i < n; ++i) A(i, j) = F.sub(A(i, j), F.mul(f, A(i, k + 1)));
                for (int i = 0; i < n; ++i) A(j, i) = F.sub(A(j, i), F.mul(f, A(k + 1, i)));
            }
            Scalar g = F.div(A(k + 1, j), A(k + 1, k));
            if (g) {
                for (int i = 0; i < n; ++i) A(i, j) = F.sub(A(i, j), F.mul(g, A(i, k)));
                for (int i = 0; i < n; ++i) A(j, i) = F.sub(A(j, i), F.mul(g, A(k, i)));
            }
        }
    }
    return res;
}

InvariantFamily invariant_family(const GroupType& type) {
    InvariantFamily fam;
    fam.type = type;
    int N = type.N, n = type.n;
    std::vector<std::pair<int, int>> gens;  // degree, coefficient
    switch (type.family) {
        case Family::SL:
            for (int k = 2; k <= N; ++k) gens.push_back({k, k});
            break;
        case Family::GL:
            for (int k = 1; k <= N; ++k) gens.push_back({k, k});
            break;
        case Family::SO_odd:
        case Family::Sp:
            for (int k = 2; k <= 2 * n; k += 2) gens.push_back({k, k});
            break;
        case Family::SO_even:
            for (int k = 2; k <= 2 * n - 2; k += 2) gens.push_back({k, k});
            gens.push_back({n, 0});
            break;
    }
    std::stable_sort(gens.begin(), gens.end(), [](auto& a, auto& b) { return a.first < b.first; });
    for (auto [d, k] : gens) {
        fam.degrees.push_back(d);
        fam.coefficient.push_back(k);
    }
    return fam;
}

InvariantFamily invariant_generators(const PrimeField& F, const AlgebraBasis& alg) {
    if (alg.type.N > 12) throw std::invalid_argument("symbolic invariants need N <= 12");
    InvariantFamily fam = invariant_family(alg.type);
    PolyMat X = affine_matrix(F, Mat(alg.type.N, alg.type.N), alg.basis);
    fam.generators = family_polys(F, fam, X);
    return fam;
}

std::vector<Scalar> invariant_values(const PrimeField& F, const InvariantFamily& fam, const Mat& X) {
    UPoly cp = char_poly(F, X);
    int N = X.rows;
    cp.resize(N + 1, 0);
    std::vector<Scalar> out;
    for (int k : fam.coefficient) {
        if (k) out.push_back(cp[N - k]);
        else {
            Mat Y = mat_mul(F, X, fam.right.rows ? fam.right : form_matrix(F, fam.type));
            if (!fam.support.empty()) {
                int k2 = static_cast<int>(fam.support.size());
                Mat Z(k2, k2);
                for (int a = 0; a < k2; ++a)
                    for (int b = 0; b < k2; ++b) Z(a, b) = Y(fam.support[a], fam.support[b]);
                Y = Z;
            }
            out.push_back(pfaffian(F, Y));
        }
    }
    return out;
}

std::vector<MPoly> restrict_affine(const PrimeField& F, const InvariantFamily& fam, const Mat& base,
                                   const std::vector<Mat>& dirs) {
    return family_polys(F, fam, affine_matrix(F, base, dirs));
}

std::vector<MPoly> restrict_to(const PrimeField& F, const InvariantFamily& fam, const std::vector<Mat>& dirs) {
    int N = dirs.empty() ? fam.type.N : dirs.front().rows;
    return restrict_affine(F, fam, Mat(N, N), dirs);
}

std::vector<int> independent_at(const PrimeField& F, const std::vector<MPoly>& fs, const Vec& point) {
    std::vector<int> chosen;
    std::vector<Vec> rows;
    int n = static_cast<int>(point.size());
    for (int i = 0; i < static_cast<int>(fs.size()); ++i) {
        Mat J = jacobian_at(F, {fs[i]}, point);
        Vec g(J.a.begin(), J.a.end());
        rows.push_back(g);
        if (span_dim(F, rows, n) == static_cast<int>(rows.size())) {
            chosen.push_back(i);
        } else {
            rows.pop_back();
        }
    }
    return chosen;
}

ChevalleyReport chevalley_check(const PrimeField& F, const InvariantFamily& fam, const CartanSubspace& c,
                                const LittleWeylGroup& wc, const std::vector<int>& expected_degrees,
                                std::uint64_t seed) {
    ChevalleyReport rep;
    int r = c.r();
    if (r == 0) {
        rep.invariant = rep.independent = true;
        rep.degrees_match = expected_degrees.empty();
        return rep;
    }
    rep.restricted = restrict_to(F, fam, c.basis);
    rep.invariant = true;
    for (const Mat& g : wc.elements) {
        std::vector<MPoly> images;
        for (int j = 0; j < r; ++j) {
            MPoly im(r);
            for (int i = 0; i < r; ++i)
                if (g(j, i)) im = poly_add(F, im, mono(r, i, g(j, i), F));
            images.push_back(im);
        }
        for (auto& f : rep.restricted)
            if (!(substitute(F, f, images) == f)) rep.invariant = false;
    }
    Rng rng(seed);
    for (int attempt = 0; attempt < 10 && static_cast<int>(rep.selected.size()) < r; ++attempt) {
        Vec pt(r);
        for (auto& x : pt) x = F.random(rng);
        auto sel = independent_at(F, rep.restricted, pt);
        if (sel.size() > rep.selected.size()) rep.selected = sel;
    }
    rep.independent = static_cast<int>(rep.selected.size()) == r;
    for (int i : rep.selected) rep.degrees.push_back(fam.degrees[i]);
    auto a = rep.degrees, b = expected_degrees;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    rep.degrees_match = rep.independent && a == b;
    return rep;
}

ReductionSubgroup reduction_subgroup(const Session& s, const CartanSubspace& c, const EigenFlags& flags,
                                 const GmqrLabel& predicted) {
    const PrimeField& F = s.F;
    const AlgebraBasis& alg = s.alg;
    ReductionSubgroup sub;
    sub.row = s.case_label;
    int r = c.r(), m = s.scenario.m, rm = r * m;
    const Family gf = s.type.family;
    if (r == 0) throw std::invalid_argument("the subgroup is built for positive rank");
    auto half = [&](int v) {
        if (v % 2) throw MathError("odd size where an even one is needed");
        return v / 2;
    };
    bool via_reflection = false, via_outer_form = false;
    const std::string& row = sub.row;
    if (row == "1" || row == "2II" || row == "3II") {
        if (rm % static_cast<int>(F.p()) == 0) throw MathError("general linear form is not supported");
        sub.type = GroupType::make(Family::SL, rm);
        sub.restricted = "1";
    } else if (row == "2I") {
        bool q2 = predicted.q == 2;
        sub.type = GroupType::make(gf == Family::SO_even && q2 ? Family::SO_even : Family::SO_odd, half(rm));
        via_reflection = gf == Family::SO_even && !q2;
        sub.restricted = "2";
    } else if (row == "2III") {
        bool odd = gf == Family::SO_odd || flags.s0 > 0;
        sub.type = GroupType::make(odd ? Family::SO_odd : Family::SO_even, rm);
        via_reflection = gf == Family::SO_even && odd;
        sub.restricted = "2";
    } else if (row == "3I") {
        sub.type = GroupType::make(Family::Sp, half(rm));
        sub.restricted = "3";
    } else if (row == "3III") {
        sub.type = GroupType::make(Family::Sp, rm);
        sub.restricted = "3";
    } else if (row == "4I") {
        sub.type = GroupType::make(Family::SL, half(rm));
        sub.restricted = "4";
    } else if (row == "4III") {
        if (flags.outer_minus) {
            sub.type = GroupType::make(Family::Sp, half(rm));
            sub.restricted = "3";
        } else {
            sub.type = GroupType::make(predicted.q == 2 ? Family::SO_even : Family::SO_odd, half(rm));
            sub.restricted = "2";
        }
        via_outer_form = true;
    } else {
        throw MathError("no subgroup construction for case " + row);
    }

    // minimal Levi subalgebra containing c
    auto zc = centralizer_in(F, alg, c.basis, all_coords(alg));
    auto torus = coords_of(alg, s.torus.basis);
    auto central_torus = intersect(F, derived(F, alg, zc), torus, alg.dim());
    auto levi = centralizer_in(F, alg, as_mats(alg, central_torus), all_coords(alg));
    std::vector<Vec> l = derived(F, alg, levi);
    if (gf == Family::GL && central_torus.empty()) l = derived(F, alg, all_coords(alg));

    int want = sub.type.expected_dim();
    if (via_reflection) {
        // centralizer of a reflection swapping a coordinate pair on which c vanishes
        int N = s.type.N;
        std::vector<Vec> best;
        for (int j = 0; j < s.type.n; ++j) {
            bool zero = true;
            for (auto& b : c.basis)
                if (b(j, j)) zero = false;
            if (!zero) continue;
            Mat h = Mat::identity(N);
            h(j, j) = h(N - 1 - j, N - 1 - j) = 0;
            h(j, N - 1 - j) = h(N - 1 - j, j) = 1;
            Mat th = theta_group(F, s.spec, h);
            if (th != h && th != mat_scale(F, h, F.neg(1))) continue;
            auto fx = fixed_space(F, alg, [&](const Mat& X) { return mat_mul(F, mat_mul(F, h, X), h); });
            auto cand = intersect(F, l, fx, alg.dim());
            if (static_cast<int>(cand.size()) == want) {
                best = cand;
                break;
            }
        }
        l = best;
    } else if (via_outer_form) {
        Mat A = mat_pow(F, s.spec.nw, m / 2);
        Mat Ai = inverse_or_throw(F, A);
        auto fx = fixed_space(F, alg, [&](const Mat& X) {
            return mat_scale(F, mat_mul(F, mat_mul(F, A, transpose(X)), Ai), F.neg(1));
        });
        l = intersect(F, l, fx, alg.dim());
    }
    sub.basis = l;
    sub.dim_ok = static_cast<int>(l.size()) == want;
    sub.contains_c = true;
    for (auto& v : coords_of(alg, c.basis))
        if (!in_span(F, l, v)) sub.contains_c = false;
    sub.theta_stable = true;
    for (auto& v : l)
        if (!in_span(F, l, mat_vec(F, s.op, v))) sub.theta_stable = false;
    sub.closed = static_cast<int>(derived(F, alg, l).size()) <= static_cast<int>(l.size());
    if (sub.closed) {
        auto mats = as_mats(alg, l);
        for (std::size_t i = 0; i < mats.size() && sub.closed; ++i)
            for (std::size_t j = i + 1; j < mats.size() && sub.closed; ++j)
                if (!in_span(F, l, alg.to_coords(commutator(F, mats[i], mats[j])))) sub.closed = false;
    }
    for (int i = 0; i < m; ++i)
        sub.dims.push_back(static_cast<int>(intersect(F, l, s.grading.piece(i), alg.dim()).size()));
    sub.family = invariant_family(sub.type);
    if (sub.type.family == Family::SO_even) {
        int N = s.type.N;
        std::vector<bool> used(N, false);
        for (auto& X : as_mats(alg, l))
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    if (X(i, j)) used[i] = used[j] = true;
        for (int i = 0; i < N; ++i)
            if (used[i]) sub.family.support.push_back(i);
        sub.family.right = via_outer_form ? mat_pow(F, s.spec.nw, m / 2) : form_matrix(F, s.type);
    }
    return sub;
}

namespace {

void finish_position(const PrimeField& F, NormalizedPosition& pos, Scalar zeta) {
    pos.alg = build_algebra(F, pos.spec.type);
    pos.torus = diagonal_torus(F, pos.spec.type);
    pos.op = dtheta_operator(F, pos.spec, pos.alg);
    pos.grading = compute_grading(F, pos.op, pos.spec.m);
    pos.case_label = classify_case(F, pos.spec);
    pos.e_in_g1 = in_algebra(F, pos.spec.type, pos.e) && !pos.e.is_zero() &&
                  dtheta_apply(F, pos.spec, pos.e) == mat_scale(F, pos.e, zeta) &&
                  order_of(F, pos.op, pos.spec.m) == pos.spec.m;
    pos.centralizer_dim = static_cast<int>(centralizer_in(F, pos.alg, {pos.e}, all_coords(pos.alg)).size());
}

}  // namespace

NormalizedPosition regular_nilpotent(const PrimeField& F, const std::string& row, const GroupType& L, int m,
                                     int r, Scalar zeta, Scalar xi) {
    NormalizedPosition pos;
    int N = L.N, n = L.n;
    auto zp = [&](long long k) { return F.pow(zeta, static_cast<std::uint64_t>(((k % m) + m) % m)); };
    auto xp = [&](long long k) { return F.pow(xi, static_cast<std::uint64_t>(((k % (2 * m)) + 2 * m) % (2 * m))); };
    Mat e(N, N), t(N, N);
    // 1-indexed entries as in the usual matrix notation
    auto E = [&](int i, int j, int sign) { e(i - 1, j - 1) = sign > 0 ? 1 : F.neg(1); };
    pos.spec.type = L;
    pos.spec.m = m;
    switch (L.family) {
        case Family::SL:
        case Family::GL:
            if (row == "4I") {
                // psi = Int(t J) o transpose-inverse
                int split = N % 2 ? (N - 1) / 2 : N / 2;
                for (int i = 1; i < N; ++i) E(i, i + 1, i <= split ? 1 : -1);
                Scalar ti = (m - 2) % 4 == 0 && r % 2 ? zp((m - 2) / 4) : zp(m - 1);
                for (int j = 1; j <= N; ++j) {
                    t(j - 1, j - 1) = ti;
                    Scalar ratio = N % 2 == 0 && j == N / 2 ? F.neg(zeta) : zeta;
                    ti = F.div(ti, ratio);
                }
                Mat J(N, N);
                for (int i = 0; i < N; ++i) J(i, N - 1 - i) = 1;
                Mat g = mat_mul(F, t, J);
                pos.spec.nw = L.family == Family::SL ? unimodular(F, g) : g;
                pos.spec.outer = true;
            } else {
                for (int j = 1; j <= N; ++j) t(j - 1, j - 1) = zp(-j);
                for (int i = 1; i < N; ++i) E(i, i + 1, 1);
                pos.spec.nw = L.family == Family::SL ? unimodular(F, t) : t;
            }
            break;
        case Family::SO_odd:
            for (int i = 1; i <= N; ++i) t(i - 1, i - 1) = zp(n + 1 - i);
            for (int i = 1; i <= n; ++i) E(i, i + 1, 1);
            for (int i = n + 1; i <= 2 * n; ++i) E(i, i + 1, -1);
            pos.spec.nw = t;
            break;
        case Family::SO_even: {
            bool negative_half = row == "2I" || row == "4III";
            if (negative_half && r % 2) {
                // block matrix with a swapped middle pair; the last block inverts the first
                for (int j = 1; j <= n - 1; ++j) {
                    Scalar sj = F.neg(zp(-j));
                    t(j - 1, j - 1) = sj;
                    t(2 * n - j, 2 * n - j) = F.inv(sj);
                }
                t(n - 1, n) = t(n, n - 1) = 1;
            } else {
                for (int i = 1; i <= n; ++i) {
                    t(i - 1, i - 1) = zp(n - i);
                    t(2 * n - i, 2 * n - i) = zp(i - n);
                }
            }
            for (int i = 1; i <= n - 1; ++i) E(i, i + 1, 1);
            if (n >= 2) {
                E(n - 1, n + 1, 1);
                E(n, n + 2, -1);
            }
            for (int i = n + 1; i <= 2 * n - 1; ++i) E(i, i + 1, -1);
            pos.spec.nw = t;
            break;
        }
        case Family::Sp:
            for (int i = 1; i <= N; ++i) t(i - 1, i - 1) = xp(2 * m + 1 - 2 * i);
            for (int i = 1; i <= n; ++i) E(i, i + 1, 1);
            for (int i = n + 1; i <= 2 * n - 1; ++i) E(i, i + 1, -1);
            pos.spec.nw = t;
            break;
    }
    pos.e = e;
    finish_position(F, pos, zeta);
    return pos;
}

NormalizedPosition zero_rank_position(const Session& s) {
    const PrimeField& F = s.F;
    NormalizedPosition pos;
    pos.spec = s.spec;
    Mat e(s.type.N, s.type.N);
    const auto& roots = s.torus.roots;
    std::vector<int> pos_roots;
    for (int k = 0; k < static_cast<int>(roots.size()); ++k)
        if (roots[k].row < roots[k].col) pos_roots.push_back(k);
    for (int k : pos_roots) {
        bool simple = true;
        for (int a : pos_roots)
            for (int b : pos_roots) {
                std::vector<int> sum(roots[a].weight.size());
                for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = roots[a].weight[i] + roots[b].weight[i];
                if (sum == roots[k].weight) simple = false;
            }
        if (simple) e = mat_add(F, e, roots[k].vector);
    }
    pos.e = e;
    finish_position(F, pos, s.zeta);
    return pos;
}

std::optional<Mat> associated_cocharacter(const PrimeField& F, const NormalizedPosition& pos) {
    const auto& T = pos.torus.basis;
    int N = pos.spec.type.N, k = static_cast<int>(T.size());
    bool gl = pos.spec.type.family == Family::GL;
    Mat A(N * N + (gl ? 1 : 0), k);
    Vec rhs(A.rows, 0);
    for (int c = 0; c < k; ++c) {
        Vec v = flatten(commutator(F, T[c], pos.e));
        for (int i = 0; i < N * N; ++i) A(i, c) = v[i];
        if (gl) A(N * N, c) = trace(F, T[c]);
    }
    Vec two = flatten(mat_scale(F, pos.e, 2));
    for (int i = 0; i < N * N; ++i) rhs[i] = two[i];
    auto sol = solve(F, A, rhs);
    if (!sol) return std::nullopt;
    Mat h(N, N);
    for (int c = 0; c < k; ++c) h = mat_add(F, h, mat_scale(F, T[c], (*sol)[c]));
    return h;
}

KWSection build_section(const PrimeField& F, const NormalizedPosition& pos, const Mat& h) {
    const AlgebraBasis& alg = pos.alg;
    KWSection sec;
    sec.e = pos.e;
    sec.h = h;
    std::vector<Vec> image;
    for (auto& x : piece_matrices(alg, pos.grading, 0)) image.push_back(alg.to_coords(commutator(F, x, pos.e)));
    image = echelon_basis(F, image, alg.dim());
    sec.image_dim = static_cast<int>(image.size());
    const auto& g1 = pos.grading.piece(1);
    sec.g1_dim = static_cast<int>(g1.size());
    Mat adh = ad_matrix(F, alg, h);
    for (int w : integer_weights(F, h)) {
        auto W = weight_space(F, adh, g1, w);
        if (W.empty()) continue;
        auto cur = intersect(F, image, W, alg.dim());
        for (auto& v : W) {
            if (in_span(F, cur, v)) continue;
            cur.push_back(v);
            cur = echelon_basis(F, cur, alg.dim());
            sec.u.push_back(alg.element(v));
            sec.weights.push_back(w);
        }
    }
    return sec;
}

SectionCheck verify_section(const PrimeField& F, const InvariantFamily& fam, const KWSection& sec,
                            std::uint64_t seed, int jacobian_points, int samples) {
    SectionCheck chk;
    int r = sec.r();
    if (r == 0) {
        chk.selection = chk.jacobian_at_e = chk.weighted = true;
        return chk;
    }
    auto R = restrict_affine(F, fam, sec.e, sec.u);
    Vec zero(r, 0);
    chk.selected = independent_at(F, R, zero);
    chk.selection = static_cast<int>(chk.selected.size()) == r;
    for (int i : chk.selected) chk.degrees.push_back(fam.degrees[i]);
    // weighted homogeneity: s_j carries weight 2 - w_j, F_i has weight 2 m_i
    chk.weighted = true;
    for (int i = 0; i < fam.size(); ++i) {
        if (R[i].total_degree() > fam.degrees[i]) chk.weighted = false;
        for (auto& [ex, coef] : R[i].terms()) {
            long long wt = 0;
            for (int j = 0; j < r; ++j) wt += static_cast<long long>(ex[j]) * (2 - sec.weights[j]);
            if (wt != 2LL * fam.degrees[i]) chk.weighted = false;
        }
    }
    if (!chk.selection) return chk;
    std::vector<MPoly> S;
    for (int i : chk.selected) S.push_back(R[i]);
    std::vector<std::vector<MPoly>> grad(r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) grad[i].push_back(partial_derivative(F, S[i], j));
    auto jac_det = [&](const Vec& pt) {
        Mat J(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) J(i, j) = evaluate(F, grad[i][j], pt);
        return det(F, J);
    };
    chk.jacobian_at_e = jac_det(zero) != 0;
    Rng rng(seed);
    chk.jacobian_points = jacobian_points;
    for (int k = 0; k < jacobian_points; ++k) {
        Vec pt(r);
        for (auto& x : pt) x = F.random(rng);
        if (jac_det(pt)) ++chk.jacobian_nonsingular;
        else if (!chk.witness) chk.witness = pt;
    }
    std::map<Vec, Vec> seen;
    std::map<Vec, bool> points;
    chk.samples = samples;
    for (int k = 0; k < samples; ++k) {
        Vec pt(r);
        for (auto& x : pt) x = F.random(rng);
        points[pt] = true;
        Vec val(r);
        for (int i = 0; i < r; ++i) val[i] = evaluate(F, S[i], pt);
        auto [it, fresh] = seen.emplace(val, pt);
        if (!fresh && it->second != pt) {
            ++chk.collisions;
            chk.witness = pt;
        }
    }
    chk.distinct_points = static_cast<int>(points.size());
    return chk;
}

Mat exp_nilpotent(const PrimeField& F, const Mat& x) {
    int N = x.rows;
    if (!mat_pow(F, x, N).is_zero()) throw std::invalid_argument("exponential of a non-nilpotent matrix");
    Mat U = Mat::identity(N), term = Mat::identity(N);
    for (int k = 1; k < N; ++k) {
        term = mat_scale(F, mat_mul(F, term, x), F.inv(static_cast<Scalar>(k)));
        U = mat_add(F, U, term);
    }
    return U;
}

std::vector<Mat> g0_unipotents(const PrimeField& F, const AlgebraBasis& alg, const AutomorphismSpec& spec,
                               const Grading& gr, int count, std::uint64_t seed) {
    (void)spec;
    int N = alg.type.N;
    auto g0 = piece_matrices(alg, gr, 0);
    auto triangular = [&](bool upper) {
        int k = static_cast<int>(g0.size());
        Mat M(N * N, k);
        for (int c = 0; c < k; ++c)
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    if (upper ? i >= j : i <= j) M(i * N + j, c) = g0[c](i, j);
        std::vector<Mat> out;
        for (auto& v : kernel_basis(F, M)) {
            Mat x(N, N);
            for (int c = 0; c < k; ++c) x = mat_add(F, x, mat_scale(F, g0[c], v[c]));
            out.push_back(x);
        }
        return out;
    };
    auto up = triangular(true), low = triangular(false);
    Rng rng(seed);
    std::vector<Mat> out;
    for (int i = 0; i < count; ++i) {
        Mat x1 = combination(F, up, N, rng);
        Mat x2 = combination(F, low, N, rng);
        Mat y = combination(F, g0, N, rng);
        Mat x3 = jordan_parts(F, y).second;
        out.push_back(mat_mul(F, mat_mul(F, exp_nilpotent(F, x1), exp_nilpotent(F, x2)), exp_nilpotent(F, x3)));
    }
    return out;
}

InvarianceReport g0_invariance(const PrimeField& F, const InvariantFamily& fam, const AlgebraBasis& alg,
                               const AutomorphismSpec& spec, const Grading& gr, std::uint64_t seed, int count) {
    InvarianceReport rep;
    auto Us = g0_unipotents(F, alg, spec, gr, count, seed);
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    rep.fixed = rep.invariant = true;
    for (const Mat& U : Us) {
        ++rep.conjugations;
        if (U != Mat::identity(U.rows)) ++rep.nontrivial;
        if (theta_group(F, spec, U) != U || !in_group(F, alg.type, U)) rep.fixed = false;
        Mat y = random_in_piece(F, alg, gr, 1, rng);
        Mat z = mat_mul(F, mat_mul(F, U, y), inverse_or_throw(F, U));
        if (invariant_values(F, fam, z) != invariant_values(F, fam, y)) rep.invariant = false;
    }
    return rep;
}

NilpotentReport nilpotent_vanishing(const PrimeField& F, const InvariantFamily& fam,
                                    const NormalizedPosition& pos, const Mat& h, std::uint64_t seed,
                                    int samples) {
    NilpotentReport rep;
    const AlgebraBasis& alg = pos.alg;
    int N = alg.type.N;
    Mat adh = ad_matrix(F, alg, h);
    std::vector<Mat> positive;
    for (int w : integer_weights(F, h))
        if (w > 0)
            for (auto& v : weight_space(F, adh, pos.grading.piece(1), w)) positive.push_back(alg.element(v));
    auto Us = g0_unipotents(F, alg, pos.spec, pos.grading, samples, seed);
    Rng rng(seed + 17);
    rep.all_nilpotent = rep.vanish = true;
    std::vector<Scalar> zero(fam.size(), 0);
    for (const Mat& U : Us) {
        Mat x = combination(F, positive, N, rng);
        x = mat_mul(F, mat_mul(F, U, x), inverse_or_throw(F, U));
        ++rep.samples;
        if (!x.is_zero()) ++rep.nonzero;
        if (!is_nilpotent(F, x) || (!x.is_zero() && degree_of(F, alg, pos.grading, x) != 1))
            rep.all_nilpotent = false;
        if (invariant_values(F, fam, x) != zero) rep.vanish = false;
    }
    return rep;
}

int orbit_dim(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr, const Mat& x) {
    std::vector<Vec> img;
    for (auto& y : piece_matrices(alg, gr, 0)) img.push_back(alg.to_coords(commutator(F, y, x)));
    return span_dim(F, img, alg.dim());
}

FiberReport fiber_dimension(const Session& s, const CartanSubspace& c, std::uint64_t seed, int samples) {
    const PrimeField& F = s.F;
    FiberReport rep;
    rep.expected = static_cast<int>(s.grading.piece(1).size()) - c.r();
    auto all = all_coords(s.alg);
    int base = static_cast<int>(centralizer_in(F, s.alg, c.basis, all).size());
    Rng rng(seed);
    for (int attempt = 0; attempt < 50 * samples && rep.samples < samples; ++attempt) {
        Mat y = random_in_piece(F, s.alg, s.grading, 1, rng);
        Mat ss = jordan_parts(F, y).first;
        std::vector<Mat> S;
        if (!ss.is_zero()) S.push_back(ss);
        // with r = 0 every element is nilpotent; skip the zero element
        if (c.r() == 0 && y.is_zero()) continue;
        if (static_cast<int>(centralizer_in(F, s.alg, S, all).size()) != base) continue;
        ++rep.samples;
        if (orbit_dim(F, s.alg, s.grading, y) == rep.expected) ++rep.matching;
    }
    return rep;
}

bool KWReport::ok() const {
    bool case_match = !pos.case_label.empty() && !sub.restricted.empty() && pos.case_label[0] == sub.restricted[0];
    return sub.ok() && sub.dims == pos.grading.dims() && case_match && pos.e_in_g1 && pos.regular() && h &&
           h_bracket && h_fixed && dim_u && fiber_at_e && check.ok() && nilpotent.ok() && invariance.ok() &&
           fiber.ok() && chevalley.ok();
}

KWReport kw_section(const Session& s, const CartanSubspace& c, const LittleWeylReport& lw) {
    const PrimeField& F = s.F;
    KWReport rep;
    int r = c.r();
    std::uint64_t seed = s.scenario.seed;
    if (r == 0) {
        rep.sub.row = s.case_label;
        rep.sub.type = s.type;
        rep.sub.restricted = s.case_label.substr(0, 1);
        rep.sub.basis = all_coords(s.alg);
        rep.sub.contains_c = rep.sub.theta_stable = rep.sub.closed = rep.sub.dim_ok = true;
        rep.sub.dims = s.grading.dims();
        rep.sub.family = invariant_family(s.type);
        rep.pos = zero_rank_position(s);
    } else {
        rep.sub = reduction_subgroup(s, c, lw.flags, lw.predicted);
        rep.pos = regular_nilpotent(F, rep.sub.row, rep.sub.type, s.scenario.m, r, s.zeta, s.xi);
    }
    rep.h = associated_cocharacter(F, rep.pos);
    if (!rep.h) return rep;
    const Mat& h = *rep.h;
    rep.h_bracket = commutator(F, h, rep.pos.e) == mat_scale(F, rep.pos.e, 2);
    rep.h_fixed = dtheta_apply(F, rep.pos.spec, h) == h;
    rep.section = build_section(F, rep.pos, h);
    rep.dim_u = rep.section.r() == r;
    rep.fiber_at_e = rep.section.image_dim == rep.section.g1_dim - r;
    auto famL = invariant_family(rep.pos.spec.type);
    rep.check = verify_section(F, famL, rep.section, seed);
    rep.nilpotent = nilpotent_vanishing(F, famL, rep.pos, h, seed + 1);
    rep.invariance = g0_invariance(F, invariant_family(s.type), s.alg, s.spec, s.grading, seed + 2);
    rep.fiber = fiber_dimension(s, c, seed + 3);
    rep.chevalley = chevalley_check(F, r ? rep.sub.family : invariant_family(s.type), c, lw.wc,
                                    lw.pseudo.degrees, seed + 4);
    return rep;
}

}  // namespace tg
