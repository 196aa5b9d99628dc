#include "thetagrade/classical.hpp"

#include <algorithm>
#include <numeric>

namespace tg {

GroupType GroupType::make(Family f, int n) {
    if (n < 1) throw std::invalid_argument("rank parameter must be positive");
    GroupType t;
    t.family = f;
    t.n = n;
    switch (f) {
        case Family::SL:
        case Family::GL: t.N = n; break;
        case Family::SO_odd: t.N = 2 * n + 1; break;
        case Family::SO_even:
        case Family::Sp: t.N = 2 * n; break;
    }
    if (f == Family::SL && n < 2) throw std::invalid_argument("SL needs n >= 2");
    if (t.N > 16) throw std::invalid_argument("matrix size above 16");
    return t;
}

int GroupType::expected_dim() const {
    switch (family) {
        case Family::SL: return n * n - 1;
        case Family::GL: return n * n;
        case Family::SO_odd:
        case Family::Sp: return n * (2 * n + 1);
        case Family::SO_even: return 2 * n * n - n;
    }
    return 0;
}

int GroupType::torus_dim() const { return family == Family::SL ? n - 1 : n; }

std::string GroupType::name() const { return family_name(family) + "(" + std::to_string(N) + ")"; }

Mat form_matrix(const PrimeField& F, const GroupType& type) {
    int N = type.N;
    if (!has_form(type.family)) return Mat();
    Mat J(N, N);
    for (int i = 0; i < N; ++i) J(i, N - 1 - i) = 1;
    if (type.family == Family::Sp)
        for (int i = type.n; i < N; ++i) J(i, N - 1 - i) = F.neg(1);
    return J;
}

namespace {

// X -> (X - J X^T J^{-1}) / 2
Mat symmetrize(const PrimeField& F, const GroupType& type, const Mat& X) {
    Mat J = form_matrix(F, type);
    Mat Ji = inverse_or_throw(F, J);
    Mat Y = mat_sub(F, X, mat_mul(F, mat_mul(F, J, transpose(X)), Ji));
    return mat_scale(F, Y, F.inv(2));
}

Mat unit(int N, int i, int j) {
    Mat E(N, N);
    E(i, j) = 1;
    return E;
}

}  // namespace

bool in_algebra(const PrimeField& F, const GroupType& type, const Mat& X) {
    if (X.rows != type.N || X.cols != type.N) return false;
    switch (type.family) {
        case Family::GL: return true;
        case Family::SL: return trace(F, X) == 0;
        default: {
            Mat J = form_matrix(F, type);
            return mat_add(F, mat_mul(F, X, J), mat_mul(F, J, transpose(X))).is_zero();
        }
    }
}

bool in_full_isometry_group(const PrimeField& F, const GroupType& type, const Mat& g) {
    if (g.rows != type.N || g.cols != type.N) return false;
    switch (type.family) {
        case Family::GL: return det(F, g) != 0;
        case Family::SL: return det(F, g) == 1;
        default: {
            Mat J = form_matrix(F, type);
            return mat_mul(F, mat_mul(F, transpose(g), J), g) == J;
        }
    }
}

bool in_group(const PrimeField& F, const GroupType& type, const Mat& g) {
    if (!in_full_isometry_group(F, type, g)) return false;
    if (is_orthogonal(type.family)) return det(F, g) == 1;
    return true;
}

AlgebraBasis build_algebra(const PrimeField& F, const GroupType& type) {
    int N = type.N;
    std::vector<Mat> basis;
    std::vector<Vec> flat;
    auto try_add = [&](const Mat& X) {
        if (X.is_zero()) return;
        Vec v = flatten(X);
        if (in_span(F, flat, v)) return;
        flat.push_back(v);
        basis.push_back(X);
    };
    switch (type.family) {
        case Family::GL:
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) try_add(unit(N, i, j));
            break;
        case Family::SL:
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    if (i != j) try_add(unit(N, i, j));
            for (int i = 0; i + 1 < N; ++i) {
                Mat H(N, N);
                H(i, i) = 1;
                H(i + 1, i + 1) = F.neg(1);
                try_add(H);
            }
            break;
        default:
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) try_add(mat_scale(F, symmetrize(F, type, unit(N, i, j)), 2));
            break;
    }
    if (static_cast<int>(basis.size()) != type.expected_dim())
        throw MathError("algebra basis has unexpected dimension");
    AlgebraBasis alg;
    alg.type = type;
    alg.basis = basis;
    alg.coords = Coordinates(F, flat, N * N);
    return alg;
}

bool bracket_closed(const PrimeField& F, const AlgebraBasis& alg) {
    for (int i = 0; i < alg.dim(); ++i)
        for (int j = i + 1; j < alg.dim(); ++j)
            if (!alg.try_coords(commutator(F, alg.basis[i], alg.basis[j]))) return false;
    return true;
}

Scalar trace_form(const PrimeField& F, const Mat& X, const Mat& Y) {
    Scalar s = 0;
    for (int i = 0; i < X.rows; ++i)
        for (int k = 0; k < X.cols; ++k) s = F.add(s, F.mul(X(i, k), Y(k, i)));
    return s;
}

Mat gram_matrix(const PrimeField& F, const AlgebraBasis& alg) {
    int d = alg.dim();
    Mat G(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G(i, j) = trace_form(F, alg.basis[i], alg.basis[j]);
    return G;
}

bool nondegeneracy_check(const PrimeField& F, const AlgebraBasis& alg) {
    return rank(F, gram_matrix(F, alg)) == alg.dim();
}

namespace {

// torus coordinate carried by diagonal position i: (coordinate, sign), sign 0 for none
std::pair<int, int> position_weight(const GroupType& t, int i) {
    if (!has_form(t.family)) return {i, 1};
    if (i < t.n) return {i, 1};
    if (t.family == Family::SO_odd && i == t.n) return {0, 0};
    return {t.N - 1 - i, -1};
}

}  // namespace

TorusData diagonal_torus(const PrimeField& F, const GroupType& type) {
    TorusData T;
    int N = type.N, n = type.n;
    if (type.family == Family::SL) {
        for (int i = 0; i + 1 < N; ++i) {
            Mat H(N, N);
            H(i, i) = 1;
            H(i + 1, i + 1) = F.neg(1);
            T.basis.push_back(H);
        }
    } else if (type.family == Family::GL) {
        for (int i = 0; i < N; ++i) T.basis.push_back(unit(N, i, i));
    } else {
        for (int i = 0; i < n; ++i) {
            Mat H(N, N);
            H(i, i) = 1;
            H(N - 1 - i, N - 1 - i) = F.neg(1);
            T.basis.push_back(H);
        }
    }
    AlgebraBasis alg = build_algebra(F, type);
    for (const Mat& X : alg.basis) {
        int lr = -1, lc = -1;
        for (int i = 0; i < N && lr < 0; ++i)
            for (int j = 0; j < N; ++j)
                if (i != j && X(i, j)) { lr = i; lc = j; break; }
        if (lr < 0) continue;
        Root r;
        r.row = lr;
        r.col = lc;
        r.vector = X;
        r.weight.assign(type.n, 0);
        auto [ci, si] = position_weight(type, lr);
        auto [cj, sj] = position_weight(type, lc);
        if (si) r.weight[ci] += si;
        if (sj) r.weight[cj] -= sj;
        T.root_at[{lr, lc}] = static_cast<int>(T.roots.size());
        T.roots.push_back(std::move(r));
    }
    // every root vector is an eigenvector of the torus
    for (std::size_t k = 0; k < T.roots.size(); ++k)
        for (const Mat& h : T.basis) {
            Mat lhs = commutator(F, h, T.roots[k].vector);
            Mat rhs = mat_scale(F, T.roots[k].vector, T.evaluate(F, static_cast<int>(k), h));
            if (lhs != rhs) throw MathError("root vector is not a torus eigenvector");
        }
    return T;
}

Scalar TorusData::evaluate(const PrimeField& F, int k, const Mat& h) const {
    const Root& r = roots[k];
    return F.sub(h(r.row, r.row), h(r.col, r.col));
}

int TorusData::find_root(const PrimeField& F, const Mat& Y, Scalar* scale) const {
    int N = Y.rows;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (!Y(i, j)) continue;
            auto it = root_at.find({i, j});
            if (it == root_at.end()) return -1;
            const Root& r = roots[it->second];
            Scalar c = F.div(Y(i, j), r.vector(i, j));
            if (mat_scale(F, r.vector, c) != Y) return -1;
            if (scale) *scale = c;
            return it->second;
        }
    return -1;
}

int TorusData::negative(int k) const {
    const Root& r = roots[k];
    for (std::size_t q = 0; q < roots.size(); ++q) {
        bool neg = true;
        for (std::size_t c = 0; c < r.weight.size(); ++c)
            if (roots[q].weight[c] != -r.weight[c]) { neg = false; break; }
        if (neg) return static_cast<int>(q);
    }
    return -1;
}

WeylElement WeylElement::identity(int n) {
    WeylElement w;
    w.perm.resize(n);
    std::iota(w.perm.begin(), w.perm.end(), 0);
    w.sign.assign(n, 1);
    return w;
}

WeylElement WeylElement::compose(const WeylElement& rhs) const {
    int n = degree();
    if (rhs.degree() != n) throw std::invalid_argument("Weyl degree mismatch");
    WeylElement w;
    w.perm.resize(n);
    w.sign.resize(n);
    for (int j = 0; j < n; ++j) {
        int k = rhs.perm[j];
        w.perm[j] = perm[k];
        w.sign[j] = rhs.sign[j] * sign[k];
    }
    return w;
}

WeylElement WeylElement::inverse() const {
    int n = degree();
    WeylElement w;
    w.perm.resize(n);
    w.sign.resize(n);
    for (int j = 0; j < n; ++j) {
        w.perm[perm[j]] = j;
        w.sign[perm[j]] = sign[j];
    }
    return w;
}

int WeylElement::flips() const {
    return static_cast<int>(std::count(sign.begin(), sign.end(), -1));
}

bool is_rotation(const WeylElement& w) { return w.flips() % 2 == 0; }

WeylElement weyl_from_cycles(const std::vector<std::pair<int, bool>>& cycles) {
    int n = 0;
    for (auto& c : cycles) {
        if (c.first < 1) throw std::invalid_argument("cycle length must be positive");
        n += c.first;
    }
    WeylElement w = WeylElement::identity(n);
    int start = 0;
    for (auto& [len, negative] : cycles) {
        for (int k = 0; k < len; ++k) w.perm[start + k] = start + (k + 1) % len;
        if (negative) w.sign[start + len - 1] = -1;
        start += len;
    }
    return w;
}

std::vector<WeylElement> enumerate_weyl(const GroupType& type) {
    int n = type.weyl_degree();
    bool sgn = type.signed_weyl();
    if (sgn ? n > 7 : n > 8) throw std::invalid_argument("Weyl enumeration cap exceeded");
    std::vector<WeylElement> out;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        int masks = sgn ? (1 << n) : 1;
        for (int mask = 0; mask < masks; ++mask) {
            WeylElement w;
            w.perm = p;
            w.sign.resize(n);
            for (int j = 0; j < n; ++j) w.sign[j] = (mask >> j) & 1 ? -1 : 1;
            out.push_back(std::move(w));
        }
    } while (std::next_permutation(p.begin(), p.end()));
    std::sort(out.begin(), out.end());
    return out;
}

Mat monomial_lift(const PrimeField& F, const GroupType& type, const WeylElement& w,
                  const Vec& torus_part) {
    int n = type.n, N = type.N;
    if (w.degree() != n) throw std::invalid_argument("Weyl element has wrong degree");
    if (static_cast<int>(torus_part.size()) != n) throw std::invalid_argument("torus part has wrong length");
    for (Scalar a : torus_part)
        if (!a) throw std::invalid_argument("torus part entries must be nonzero");
    Mat g(N, N);
    if (!has_form(type.family)) {
        for (int j = 0; j < n; ++j) {
            if (w.sign[j] != 1) throw std::invalid_argument("signed permutation for a linear group");
            g(w.perm[j], j) = torus_part[j];
        }
        return g;
    }
    Mat J = form_matrix(F, type);
    for (int j = 0; j < n; ++j) {
        int t = w.sign[j] > 0 ? w.perm[j] : N - 1 - w.perm[j];
        Scalar a = torus_part[j];
        g(t, j) = a;
        g(N - 1 - t, N - 1 - j) = F.mul(F.inv(a), J(t, N - 1 - t));
    }
    if (type.family == Family::SO_odd) g(n, n) = 1;
    return g;
}

Mat lift_weyl(const PrimeField& F, const GroupType& type, const WeylElement& w,
              const Vec& torus_part, bool allow_orthogonal) {
    Mat g = monomial_lift(F, type, w, torus_part);
    int n = type.n;
    Scalar d = det(F, g);
    switch (type.family) {
        case Family::SL:
            for (int i = 0; i < type.N; ++i)
                if (g(i, n - 1)) g(i, n - 1) = F.div(g(i, n - 1), d);
            break;
        case Family::SO_odd: g(n, n) = d; break;
        case Family::SO_even:
            if (d != 1 && !allow_orthogonal)
                throw LiftFeasibility("no lift of this Weyl element lies in SO(2n)");
            break;
        default: break;
    }
    bool ok = allow_orthogonal ? in_full_isometry_group(F, type, g) : in_group(F, type, g);
    if (!ok) throw LiftFeasibility("monomial lift failed group membership");
    return g;
}

Mat normal_lift(const PrimeField& F, const GroupType& type, const WeylElement& w,
                const Vec& torus_part, bool allow_orthogonal) {
    Vec part = torus_part;
    if (type.family == Family::SO_even) {
        // last entry of each positive cycle is -1
        std::vector<bool> seen(w.degree(), false);
        for (int s = 0; s < w.degree(); ++s) {
            if (seen[s]) continue;
            int j = s, last = s, prod = 1;
            do {
                seen[j] = true;
                prod *= w.sign[j];
                last = j;
                j = w.perm[j];
            } while (j != s);
            if (prod > 0) part[last] = F.neg(part[last]);
        }
    }
    return lift_weyl(F, type, w, part, allow_orthogonal);
}

std::optional<WeylElement> weyl_of(const PrimeField& F, const GroupType& type, const Mat& g) {
    (void)F;
    int n = type.n, N = type.N;
    std::vector<int> target(N, -1);
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i)
            if (g(i, j)) {
                if (target[j] >= 0) return std::nullopt;
                target[j] = i;
            }
        if (target[j] < 0) return std::nullopt;
    }
    WeylElement w = WeylElement::identity(n);
    if (!has_form(type.family)) {
        for (int j = 0; j < n; ++j) w.perm[j] = target[j];
        return w;
    }
    for (int j = 0; j < n; ++j) {
        int t = target[j];
        if (type.family == Family::SO_odd && t == n) return std::nullopt;
        if (t < n) {
            w.perm[j] = t;
        } else {
            w.perm[j] = N - 1 - t;
            w.sign[j] = -1;
        }
        if (target[N - 1 - j] != N - 1 - t) return std::nullopt;
    }
    return w;
}

std::vector<Mat> center_elements(const PrimeField& F, const GroupType& type) {
    int N = type.N;
    std::vector<Mat> out;
    switch (type.family) {
        case Family::SL:
        case Family::GL:
            for (Scalar w = 1; w < F.p(); ++w)
                if (type.family == Family::GL || F.pow(w, N) == 1)
                    out.push_back(Mat::diag(Vec(N, w)));
            break;
        case Family::SO_odd: out.push_back(Mat::identity(N)); break;
        case Family::SO_even:
        case Family::Sp:
            out.push_back(Mat::identity(N));
            out.push_back(Mat::diag(Vec(N, F.neg(1))));
            break;
    }
    return out;
}

}  // namespace tg
