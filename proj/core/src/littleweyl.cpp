#include "thetagrade/littleweyl.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace tg {

std::string GmqrLabel::str() const {
    if (r == 0) return "trivial";
    return "G(" + std::to_string(m) + "," + std::to_string(q) + "," + std::to_string(r) + ")";
}

long long GmqrLabel::order() const {
    long long o = 1;
    for (int i = 0; i < r; ++i) o *= m;
    for (int i = 2; i <= r; ++i) o *= i;
    return o / q;
}

bool LittleWeylGroup::contains(const Mat& g) const {
    return std::binary_search(elements.begin(), elements.end(), g);
}

bool LittleWeylGroup::subset_of(const LittleWeylGroup& other) const {
    return std::all_of(elements.begin(), elements.end(), [&](const Mat& g) { return other.contains(g); });
}

bool LittleWeylGroup::closed(const PrimeField& F) const {
    if (!contains(Mat::identity(r))) return false;
    for (auto& a : elements)
        for (auto& b : elements)
            if (!contains(mat_mul(F, a, b))) return false;
    return true;
}

std::vector<WeylElement> w_theta(const GroupType& type, const WeylElement& w, bool full_isometry) {
    std::vector<WeylElement> out;
    bool even_only = type.family == Family::SO_even && !full_isometry;
    for (auto& u : enumerate_weyl(type)) {
        if (even_only && u.flips() % 2) continue;
        if (u.compose(w) == w.compose(u)) out.push_back(u);
    }
    return out;
}

Mat weyl_representative(const PrimeField& F, const GroupType& type, const WeylElement& u, bool orthogonal) {
    return lift_weyl(F, type, u, Vec(type.n, 1), orthogonal);
}

std::optional<Mat> action_matrix(const PrimeField& F, const CartanSubspace& c, const Mat& g) {
    int r = c.r();
    if (r == 0) return Mat(0, 0);
    int N = g.rows;
    std::vector<Vec> flat;
    for (auto& x : c.basis) flat.push_back(flatten(x));
    Coordinates co(F, flat, N * N);
    Mat gi = inverse_or_throw(F, g);
    Mat a(r, r);
    for (int j = 0; j < r; ++j) {
        auto y = co.try_coords(flatten(mat_mul(F, mat_mul(F, g, c.basis[j]), gi)));
        if (!y) return std::nullopt;
        for (int i = 0; i < r; ++i) a(i, j) = (*y)[i];
    }
    return a;
}

bool is_monomial(const Mat& a) {
    for (int i = 0; i < a.rows; ++i) {
        int row = 0, col = 0;
        for (int j = 0; j < a.cols; ++j) {
            row += a(i, j) != 0;
            col += a(j, i) != 0;
        }
        if (row != 1 || col != 1) return false;
    }
    return true;
}

namespace {

LittleWeylGroup from_set(int r, std::set<Mat> s) {
    LittleWeylGroup g;
    g.r = r;
    g.elements.assign(s.begin(), s.end());
    return g;
}

long long mod(long long a, long long M) {
    a %= M;
    return a < 0 ? a + M : a;
}

long long inv_mod(long long a, long long M) {
    long long g = M, x = 0, x1 = 1, aa = mod(a, M);
    while (aa) {
        long long q = g / aa;
        std::tie(g, aa) = std::make_pair(aa, g - q * aa);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    return mod(x, M);
}

int torus_coords(const GroupType& t) { return has_form(t.family) ? t.n : t.N; }

Mat torus_element(const PrimeField& F, const GroupType& t, const std::vector<long long>& v) {
    Mat d = Mat::identity(t.N);
    int k = torus_coords(t);
    for (int j = 0; j < k; ++j) {
        d(j, j) = F.exp(v[j]);
        if (has_form(t.family)) d(t.N - 1 - j, t.N - 1 - j) = F.exp(-v[j]);
    }
    return d;
}

bool is_diagonal(const Mat& x) {
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j)
            if (i != j && x(i, j)) return false;
    return true;
}

}  // namespace

LittleWeylGroup action_on_cartan(const PrimeField& F, const GroupType& type,
                                 const std::vector<WeylElement>& ws, const CartanSubspace& c,
                                 bool orthogonal) {
    std::set<Mat> s;
    for (auto& u : ws) {
        auto a = action_matrix(F, c, weyl_representative(F, type, u, orthogonal));
        if (!a) throw MathError("a theta-fixed Weyl element does not stabilize c");
        if (!is_monomial(*a)) throw MathError("Weyl element acts on c by a non-monomial matrix");
        s.insert(*a);
    }
    return from_set(c.r(), std::move(s));
}

std::optional<CongruenceSolution> solve_congruences(std::vector<std::vector<long long>> A,
                                                    std::vector<long long> b, long long M) {
    int R = static_cast<int>(A.size());
    int C = R ? static_cast<int>(A[0].size()) : 0;
    for (auto& row : A)
        for (auto& x : row) x = mod(x, M);
    std::vector<std::vector<long long>> U(R, std::vector<long long>(R, 0)), V(C, std::vector<long long>(C, 0));
    for (int i = 0; i < R; ++i) U[i][i] = 1;
    for (int j = 0; j < C; ++j) V[j][j] = 1;
    auto row_op = [&](std::vector<std::vector<long long>>& X, int i, int k, long long q) {
        for (std::size_t j = 0; j < X[i].size(); ++j) X[i][j] = mod(X[i][j] - q * X[k][j], M);
    };
    auto col_op = [&](std::vector<std::vector<long long>>& X, int j, int k, long long q) {
        for (auto& row : X) row[j] = mod(row[j] - q * row[k], M);
    };
    int K = std::min(R, C);
    for (int k = 0; k < K; ++k) {
        for (;;) {
            int bi = -1, bj = -1;
            for (int i = k; i < R; ++i)
                for (int j = k; j < C; ++j)
                    if (A[i][j] && (bi < 0 || A[i][j] < A[bi][bj])) bi = i, bj = j;
            if (bi < 0) break;
            std::swap(A[k], A[bi]);
            std::swap(U[k], U[bi]);
            for (auto& row : A) std::swap(row[k], row[bj]);
            for (auto& row : V) std::swap(row[k], row[bj]);
            bool done = true;
            for (int i = k + 1; i < R; ++i)
                if (A[i][k]) {
                    long long q = A[i][k] / A[k][k];
                    row_op(A, i, k, q);
                    row_op(U, i, k, q);
                    if (A[i][k]) done = false;
                }
            for (int j = k + 1; j < C; ++j)
                if (A[k][j]) {
                    long long q = A[k][j] / A[k][k];
                    col_op(A, j, k, q);
                    col_op(V, j, k, q);
                    if (A[k][j]) done = false;
                }
            if (done) break;
        }
    }
    std::vector<long long> c(R, 0);
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < R; ++j) c[i] = mod(c[i] + U[i][j] * mod(b[j], M), M);
    std::vector<long long> y(C, 0);
    std::vector<std::vector<long long>> gens;
    for (int i = 0; i < R; ++i) {
        long long d = i < C ? A[i][i] : 0;
        if (d == 0) {
            if (c[i]) return std::nullopt;
            continue;
        }
        long long g = std::gcd(d, M);
        if (c[i] % g) return std::nullopt;
        long long Mg = M / g;
        y[i] = Mg == 1 ? 0 : mod((c[i] / g) % Mg * inv_mod(d / g, Mg), Mg);
    }
    for (int i = 0; i < C; ++i) {
        long long d = i < R ? A[i][i] : 0;
        std::vector<long long> e(C, 0);
        if (d == 0) {
            e[i] = 1;
        } else {
            long long g = std::gcd(d, M);
            if (g == 1) continue;
            e[i] = M / g;
        }
        gens.push_back(e);
    }
    auto apply_v = [&](const std::vector<long long>& z) {
        std::vector<long long> v(C, 0);
        for (int i = 0; i < C; ++i)
            for (int j = 0; j < C; ++j) v[i] = mod(v[i] + V[i][j] * z[j], M);
        return v;
    };
    CongruenceSolution sol;
    sol.particular = apply_v(y);
    for (auto& e : gens) sol.homogeneous.push_back(apply_v(e));
    return sol;
}

std::vector<std::vector<long long>> torus_exponent_action(const PrimeField& F, const AutomorphismSpec& spec) {
    const GroupType& t = spec.type;
    int k = torus_coords(t);
    std::vector<std::vector<long long>> P(k, std::vector<long long>(k, 0));
    for (int j = 0; j < k; ++j) {
        std::vector<long long> e(k, 0);
        e[j] = 1;
        Mat y = theta_group(F, spec, torus_element(F, t, e));
        if (!is_diagonal(y)) throw MathError("theta does not stabilize the diagonal torus");
        for (int i = 0; i < k; ++i) P[i][j] = F.log(y(i, i));
    }
    return P;
}

bool in_identity_component(const PrimeField& F, const AutomorphismSpec& spec, const Mat& g) {
    if (!is_orthogonal(spec.type.family) || spec.outer) return true;
    int N = spec.type.N;
    Mat A = mat_sub(F, spec.nw, Mat::identity(N));
    auto V1 = kernel_basis(F, A);
    if (V1.empty()) return true;
    Coordinates co(F, V1, N);
    int k = static_cast<int>(V1.size());
    Mat R(k, k);
    for (int j = 0; j < k; ++j) {
        auto y = co.try_coords(mat_vec(F, g, V1[j]));
        if (!y) throw MathError("element does not commute with n_w");
        for (int i = 0; i < k; ++i) R(i, j) = (*y)[i];
    }
    return det(F, R) == 1;
}

std::optional<Certificate> realize_fixed(const PrimeField& F, const AutomorphismSpec& spec,
                                         const WeylElement& u, bool relax_center) {
    const GroupType& t = spec.type;
    Mat nu;
    try {
        nu = weyl_representative(F, t, u, false);
    } catch (const LiftFeasibility&) {
        return std::nullopt;
    }
    Mat x = mat_mul(F, inverse_or_throw(F, nu), theta_group(F, spec, nu));
    if (!is_diagonal(x)) return std::nullopt;  // u is not theta-fixed
    int k = torus_coords(t);
    long long M = F.p() - 1;
    auto P = torus_exponent_action(F, spec);
    std::vector<std::vector<long long>> A(k, std::vector<long long>(k, 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) A[i][j] = mod((i == j) - P[i][j], M);
    bool sl = t.family == Family::SL;
    if (sl) A.push_back(std::vector<long long>(k, 1));
    std::vector<Mat> centrals = relax_center ? center_elements(F, t) : std::vector<Mat>{Mat::identity(t.N)};
    std::optional<Certificate> fallback;
    for (auto& z : centrals) {
        // x z^-1 = t theta(t)^-1
        std::vector<long long> b(A.size(), 0);
        for (int j = 0; j < k; ++j) b[j] = mod(static_cast<long long>(F.log(x(j, j))) - F.log(z(j, j)), M);
        auto sol = solve_congruences(A, b, M);
        if (!sol) continue;
        Mat g = mat_mul(F, nu, torus_element(F, t, sol->particular));
        if (!in_group(F, t, g)) throw MathError("certificate left the group");
        Mat defect = mat_mul(F, inverse_or_throw(F, g), theta_group(F, spec, g));
        if (defect != z) throw MathError("certificate failed verification");
        Certificate cert{u, Mat(), z == Mat::identity(t.N) ? Realization::Fixed : Realization::Central, g, defect,
                         false};
        cert.identity_component = cert.kind != Realization::Fixed || in_identity_component(F, spec, g);
        if (!cert.identity_component) {
            // move along the torsion of T^theta
            for (auto& h : sol->homogeneous) {
                Mat g2 = mat_mul(F, g, torus_element(F, t, h));
                if (in_identity_component(F, spec, g2)) {
                    cert.g = g2;
                    cert.identity_component = true;
                    break;
                }
            }
        }
        if (cert.kind == Realization::Fixed && cert.identity_component) return cert;
        if (!fallback) fallback = cert;
    }
    return fallback;
}

int entry_order_lcm(const PrimeField& F, const LittleWeylGroup& g) {
    int l = 1;
    for (auto& x : g.elements)
        for (Scalar a : x.a)
            if (a) l = std::lcm(l, static_cast<int>(F.order(a)));
    return l;
}

std::optional<GmqrLabel> identify_gmqr(const PrimeField& F, const LittleWeylGroup& g, int ambient_m) {
    if (g.r == 0) return g.order() == 1 ? std::optional<GmqrLabel>(GmqrLabel{1, 1, 0}) : std::nullopt;
    GmqrLabel full{ambient_m, 1, g.r};
    long long big = full.order();
    if (g.order() == 0 || big % g.order()) return std::nullopt;
    long long q = big / g.order();
    if (ambient_m % q) return std::nullopt;
    GmqrLabel lab{ambient_m, static_cast<int>(q), g.r};
    int sub = ambient_m / lab.q;
    for (auto& x : g.elements) {
        if (!is_monomial(x)) return std::nullopt;
        Scalar prod = 1;
        for (Scalar a : x.a)
            if (a) {
                if (ambient_m % F.order(a)) return std::nullopt;
                prod = F.mul(prod, a);
            }
        if (sub % F.order(prod)) return std::nullopt;
    }
    return lab;
}

EigenFlags eigen_flags(const PrimeField& F, const AutomorphismSpec& spec, int r) {
    EigenFlags fl;
    int N = spec.type.N;
    Mat A = spec.outer ? outer_square(F, spec.nw) : spec.nw;
    Scalar xi = root_of_unity(F, 2 * spec.m);
    for (int d = 0; d < 2 * spec.m; ++d) {
        Scalar lam = F.pow(xi, d);
        Mat B = A;
        for (int i = 0; i < N; ++i) B(i, i) = F.sub(B(i, i), lam);
        int k = static_cast<int>(kernel_basis(F, B).size());
        if (k) fl.multiplicities.push_back({lam, k});
        if (lam == 1) fl.mult_one = k;
        if (lam == F.neg(1)) fl.mult_minus_one = k;
    }
    Mat minus = Mat::diag(Vec(N, F.neg(1)));
    if (spec.outer) {
        fl.outer_minus = mat_pow(F, A, spec.m / 2) == minus;
        fl.s0 = fl.mult_one - 2 * r;
    } else if (spec.m % 2 && mat_pow(F, A, spec.m) == minus) {
        fl.s0 = fl.mult_minus_one - 2 * r;
    } else {
        fl.s0 = fl.mult_one - 2 * r;
    }
    return fl;
}

GmqrLabel predicted_label(const std::string& case_label, const GroupType& type, int m, int r,
                          const EigenFlags& flags) {
    if (r == 0) return {1, 1, 0};
    bool even_so = type.family == Family::SO_even;
    if (case_label == "1") return {m, 1, r};
    if (case_label == "2I") {
        if (even_so && flags.mult_one == r && flags.mult_minus_one == r) return {m, 2, r};
        return {m, 1, r};
    }
    if (case_label == "2II" || case_label == "3I" || case_label == "3II") return {m, 1, r};
    if (case_label == "2III") return {2 * m, even_so && flags.s0 == 0 ? 2 : 1, r};
    if (case_label == "3III") return {2 * m, 1, r};
    if (case_label == "4I" || case_label == "4II") return {m / 2, 1, r};
    if (case_label == "4III") return {m, !flags.outer_minus && flags.s0 == 0 ? 2 : 1, r};
    throw InvalidSpec("unknown case label '" + case_label + "'");
}

LittleWeylGroup closure(const PrimeField& F, int r, const std::vector<Mat>& gens) {
    std::set<Mat> seen{Mat::identity(r)};
    std::vector<Mat> frontier{Mat::identity(r)};
    while (!frontier.empty()) {
        std::vector<Mat> next;
        for (auto& x : frontier)
            for (auto& g : gens) {
                Mat y = mat_mul(F, x, g);
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return from_set(r, std::move(seen));
}

PseudoreflectionReport pseudoreflection_analysis(const PrimeField& F, const LittleWeylGroup& g,
                                                 const GmqrLabel& label) {
    PseudoreflectionReport rep;
    Mat I = Mat::identity(g.r);
    for (auto& x : g.elements)
        if (rank(F, mat_sub(F, x, I)) == 1) rep.pseudoreflections.push_back(x);
    rep.generated_by_them = closure(F, g.r, rep.pseudoreflections).elements == g.elements;
    for (int i = 1; i < label.r; ++i) rep.degrees.push_back(i * label.m);
    if (label.r > 0) rep.degrees.push_back(label.r * label.m / label.q);
    rep.degree_product = 1;
    for (int d : rep.degrees) rep.degree_product *= d;
    return rep;
}

LittleWeylReport little_weyl(const Session& s, const CartanSubspace& c) {
    const PrimeField& F = s.F;
    const GroupType& t = s.type;
    if (s.spec.outer && t.family == Family::GL)
        throw InvalidSpec("little Weyl groups for outer automorphisms of GL are not supported");
    LittleWeylReport rep;
    auto wt = w_theta(t, s.w, false);
    rep.w_theta_order = static_cast<int>(wt.size());
    bool so_even = t.family == Family::SO_even;
    rep.w1 = action_on_cartan(F, t, wt, c, false);
    rep.w1_full = so_even ? action_on_cartan(F, t, w_theta(t, s.w, true), c, true) : rep.w1;

    std::set<Mat> wc, wz;
    for (auto& u : wt) {
        auto cert = realize_fixed(F, s.spec, u, false);
        if (!cert || !cert->identity_component) {
            auto relaxed = realize_fixed(F, s.spec, u, true);
            if (relaxed) cert = relaxed;
        }
        if (!cert) continue;
        cert->action = *action_matrix(F, c, cert->g);
        if (cert->kind == Realization::Fixed && cert->identity_component) wc.insert(cert->action);
        wz.insert(cert->action);
        rep.certificates.push_back(std::move(*cert));
    }
    rep.wc = from_set(c.r(), std::move(wc));
    rep.wz = from_set(c.r(), std::move(wz));
    rep.chain_ok = rep.wc.subset_of(rep.wz) && rep.wz.subset_of(rep.w1) && rep.wc.closed(F) &&
                   rep.wz.closed(F) && rep.w1.closed(F);
    rep.ambient_m = entry_order_lcm(F, rep.w1_full);
    rep.label = identify_gmqr(F, rep.wc, rep.ambient_m);
    rep.label_wz = identify_gmqr(F, rep.wz, rep.ambient_m);
    rep.label_w1 = identify_gmqr(F, rep.w1, rep.ambient_m);
    rep.flags = eigen_flags(F, s.spec, c.r());
    rep.predicted = predicted_label(s.case_label, t, s.scenario.m, c.r(), rep.flags);
    rep.order_formula = rep.label && rep.label->order() == rep.wc.order();
    if (rep.label) rep.pseudo = pseudoreflection_analysis(F, rep.wc, *rep.label);
    return rep;
}

}  // namespace tg
