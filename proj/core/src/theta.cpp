#include "thetagrade/theta.hpp"

#include <numeric>

namespace tg {

Mat dtheta_apply(const PrimeField& F, const AutomorphismSpec& spec, const Mat& X) {
    Mat ni = inverse_or_throw(F, spec.nw);
    if (!spec.outer) return mat_mul(F, mat_mul(F, spec.nw, X), ni);
    Mat Y = mat_mul(F, mat_mul(F, spec.nw, transpose(X)), ni);
    return mat_scale(F, Y, F.neg(1));
}

Mat theta_group(const PrimeField& F, const AutomorphismSpec& spec, const Mat& g) {
    Mat ni = inverse_or_throw(F, spec.nw);
    Mat h = spec.outer ? transpose(inverse_or_throw(F, g)) : g;
    return mat_mul(F, mat_mul(F, spec.nw, h), ni);
}

Mat outer_square(const PrimeField& F, const Mat& nw) {
    return mat_mul(F, nw, transpose(inverse_or_throw(F, nw)));
}

void validate_spec(const PrimeField& F, const AutomorphismSpec& spec) {
    const GroupType& t = spec.type;
    if (spec.m < 1) throw InvalidSpec("order must be positive");
    if (spec.nw.rows != t.N || spec.nw.cols != t.N) throw InvalidSpec("n_w has the wrong size");
    if (spec.outer && has_form(t.family)) throw InvalidSpec("outer automorphisms only for SL/GL");
    if (spec.outer && spec.m % 2) throw InvalidSpec("outer automorphisms have even order");
    bool ok = t.family == Family::SO_even && !spec.outer ? in_full_isometry_group(F, t, spec.nw)
                                                         : in_group(F, t, spec.nw);
    if (!ok) throw InvalidSpec("n_w is not in the group");
}

Mat dtheta_operator(const PrimeField& F, const AutomorphismSpec& spec, const AlgebraBasis& alg) {
    validate_spec(F, spec);
    int d = alg.dim();
    Mat op(d, d);
    for (int k = 0; k < d; ++k) {
        auto c = alg.try_coords(dtheta_apply(F, spec, alg.basis[k]));
        if (!c) throw InvalidSpec("dtheta does not preserve the algebra");
        for (int i = 0; i < d; ++i) op(i, k) = (*c)[i];
    }
    return op;
}

bool is_lie_automorphism(const PrimeField& F, const AlgebraBasis& alg, const Mat& op) {
    int d = alg.dim();
    std::vector<Mat> img(d);
    for (int k = 0; k < d; ++k) {
        Vec col(d);
        for (int i = 0; i < d; ++i) col[i] = op(i, k);
        img[k] = alg.element(col);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            Vec br = alg.to_coords(commutator(F, alg.basis[i], alg.basis[j]));
            Mat lhs = alg.element(mat_vec(F, op, br));
            if (lhs != commutator(F, img[i], img[j])) return false;
        }
    return true;
}

bool preserves_trace_form(const PrimeField& F, const AlgebraBasis& alg, const Mat& op) {
    Mat G = gram_matrix(F, alg);
    return mat_mul(F, mat_mul(F, transpose(op), G), op) == G;
}

int order_of(const PrimeField& F, const Mat& op, int cap) {
    Mat I = Mat::identity(op.rows);
    Mat P = op;
    for (int k = 1; k <= cap; ++k) {
        if (P == I) return k;
        P = mat_mul(F, P, op);
    }
    throw MathError("automorphism order exceeds cap " + std::to_string(cap));
}

std::vector<int> Grading::dims() const {
    std::vector<int> d;
    for (auto& p : pieces) d.push_back(static_cast<int>(p.size()));
    return d;
}

int Grading::total_dim() const {
    int s = 0;
    for (auto& p : pieces) s += static_cast<int>(p.size());
    return s;
}

Grading compute_grading(const PrimeField& F, const Mat& op, int m) {
    Grading gr;
    gr.m = m;
    gr.zeta = root_of_unity(F, m);
    int d = op.rows;
    for (int i = 0; i < m; ++i) {
        Mat A = op;
        Scalar z = F.pow(gr.zeta, i);
        for (int k = 0; k < d; ++k) A(k, k) = F.sub(A(k, k), z);
        gr.pieces.push_back(echelon_basis(F, kernel_basis(F, A), d));
    }
    if (gr.total_dim() != d) throw MathError("eigenspaces do not span the algebra");
    return gr;
}

std::vector<Mat> piece_matrices(const AlgebraBasis& alg, const Grading& gr, int i) {
    std::vector<Mat> out;
    for (auto& v : gr.piece(i)) out.push_back(alg.element(v));
    return out;
}

int degree_of(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr, const Mat& X) {
    auto c = alg.try_coords(X);
    if (!c) return -1;
    for (int i = 0; i < gr.m; ++i)
        if (in_span(F, gr.pieces[i], *c)) return i;
    return -1;
}

bool bracket_compatible(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr) {
    for (int i = 0; i < gr.m; ++i) {
        auto Pi = piece_matrices(alg, gr, i);
        for (int j = i; j < gr.m; ++j) {
            auto Pj = piece_matrices(alg, gr, j);
            const auto& target = gr.piece(i + j);
            for (auto& X : Pi)
                for (auto& Y : Pj) {
                    Mat Z = commutator(F, X, Y);
                    if (Z.is_zero()) continue;
                    auto c = alg.try_coords(Z);
                    if (!c || !in_span(F, target, *c)) return false;
                }
        }
    }
    return true;
}

Mat random_in_piece(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr, int i, Rng& rng) {
    const auto& P = gr.piece(i);
    Vec c(alg.dim(), 0);
    for (auto& v : P) {
        Scalar s = F.random(rng);
        for (int k = 0; k < alg.dim(); ++k) c[k] = F.add(c[k], F.mul(s, v[k]));
    }
    return alg.element(c);
}

KawanakaReport kawanaka_constants(const PrimeField& F, const AutomorphismSpec& spec,
                                  const AlgebraBasis& alg, const TorusData& torus,
                                  const Grading& gr) {
    int R = static_cast<int>(torus.roots.size());
    // root vectors paired by transposition
    std::vector<Mat> vec(R);
    for (int k = 0; k < R; ++k) {
        const Root& r = torus.roots[k];
        if (r.row < r.col) {
            vec[k] = r.vector;
        } else {
            int q = torus.negative(k);
            if (q < 0) throw MathError("root without negative");
            vec[k] = transpose(torus.roots[q].vector);
        }
    }
    KawanakaReport rep;
    rep.constant.assign(R, 0);
    rep.image.assign(R, -1);
    for (int k = 0; k < R; ++k) {
        Mat Y = dtheta_apply(F, spec, vec[k]);
        int b = torus.find_root(F, Y);
        if (b < 0) throw MathError("dtheta does not permute root spaces");
        const Root& rb = torus.roots[b];
        Scalar c = F.div(Y(rb.row, rb.col), vec[b](rb.row, rb.col));
        if (mat_scale(F, vec[b], c) != Y) throw MathError("root vector image mismatch");
        rep.constant[k] = c;
        rep.image[k] = b;
    }
    rep.inverse_pairs = true;
    for (int k = 0; k < R; ++k) {
        int q = torus.negative(k);
        if (F.mul(rep.constant[k], rep.constant[q]) != 1) rep.inverse_pairs = false;
    }
    std::vector<bool> seen(R, false);
    rep.dims_zero_one = rep.all_exact = rep.all_order_rule = rep.all_products = true;
    const auto& g1 = gr.piece(1);
    for (int k = 0; k < R; ++k) {
        if (seen[k]) continue;
        KawanakaOrbit orb;
        int j = k;
        do {
            seen[j] = true;
            orb.roots.push_back(j);
            orb.product = F.mul(orb.product, rep.constant[j]);
            j = rep.image[j];
        } while (j != k);
        orb.length = static_cast<int>(orb.roots.size());
        orb.order = static_cast<int>(F.order(orb.product));
        orb.product_identity = spec.m % orb.length == 0 &&
                               F.pow(orb.product, spec.m / orb.length) == 1;
        std::vector<Vec> span;
        for (int a : orb.roots) span.push_back(alg.to_coords(vec[a]));
        orb.dim_in_g1 = static_cast<int>(intersect(F, span, g1, alg.dim()).size());
        bool exact = orb.product == F.pow(gr.zeta, orb.length);
        bool by_order = orb.length <= spec.m && spec.m % orb.length == 0 &&
                        orb.order == spec.m / orb.length;
        orb.exact_rule = orb.dim_in_g1 == (exact ? 1 : 0);
        orb.order_rule = orb.dim_in_g1 == (by_order ? 1 : 0);
        rep.dims_zero_one = rep.dims_zero_one && orb.dim_in_g1 <= 1;
        rep.all_exact = rep.all_exact && orb.exact_rule;
        rep.all_order_rule = rep.all_order_rule && orb.order_rule;
        rep.all_products = rep.all_products && orb.product_identity;
        rep.orbits.push_back(std::move(orb));
    }
    return rep;
}

namespace {

enum class Sign { Plus, Minus, Other };

Sign scalar_sign(const PrimeField& F, const Mat& A) {
    if (A == Mat::identity(A.rows)) return Sign::Plus;
    if (A == Mat::diag(Vec(A.rows, F.neg(1)))) return Sign::Minus;
    return Sign::Other;
}

std::vector<std::pair<int, int>> cycle_shape(const WeylElement& w) {
    std::vector<std::pair<int, int>> out;  // (length, product of signs)
    std::vector<bool> seen(w.degree(), false);
    for (int s = 0; s < w.degree(); ++s) {
        if (seen[s]) continue;
        int j = s, len = 0, prod = 1;
        do {
            seen[j] = true;
            prod *= w.sign[j];
            ++len;
            j = w.perm[j];
        } while (j != s);
        out.push_back({len, prod});
    }
    return out;
}

}  // namespace

std::string classify_case(const PrimeField& F, const AutomorphismSpec& spec) {
    validate_spec(F, spec);
    const Family f = spec.type.family;
    const int m = spec.m;
    if (spec.w && has_form(f) && m % 2 == 0) {
        int pos = 0, neg = 0;
        for (auto [len, s] : cycle_shape(*spec.w)) {
            if (s > 0 && len == m) ++pos;
            if (s < 0 && 2 * len == m) ++neg;
        }
        if (pos > 0 && neg > 0)
            throw InvalidSpec("maximal cycles mix positive m-cycles and negative m/2-cycles");
    }
    if (spec.outer) {
        Mat q = mat_pow(F, outer_square(F, spec.nw), m / 2);
        Sign s = scalar_sign(F, q);
        if ((m / 2) % 2 == 1) {
            if (s == Sign::Plus) return "4I";
            if (s == Sign::Minus) return "4II";
            throw InvalidSpec("(n gamma(n))^(m/2) is not +-I");
        }
        if (s == Sign::Other) throw InvalidSpec("(n gamma(n))^(m/2) is not +-I");
        return "4III";
    }
    switch (f) {
        case Family::SL:
        case Family::GL: return "1";
        case Family::SO_odd: return m % 2 ? "2III" : "2I";
        case Family::SO_even: {
            if (m % 2) return "2III";
            Sign s = scalar_sign(F, mat_pow(F, spec.nw, m));
            if (s == Sign::Plus) return "2I";
            if (s == Sign::Minus) return "2II";
            throw InvalidSpec("n_w^m is not +-I");
        }
        case Family::Sp: {
            if (m % 2) return "3III";
            Sign s = scalar_sign(F, mat_pow(F, spec.nw, m));
            if (s == Sign::Minus) return "3I";
            if (s == Sign::Plus) return "3II";
            throw InvalidSpec("n_w^m is not +-I");
        }
    }
    return "?";
}

}  // namespace tg
