#include "thetagrade/exactlin.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace tg {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

PrimeField::PrimeField(std::uint32_t p) : p_(p), g_(0) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("modulus must be an odd prime");
    auto fac = prime_factors(p - 1);
    for (Scalar g = 2; g < p; ++g) {
        bool ok = true;
        for (auto q : fac) {
            std::uint64_t r = 1, b = g, e = (p - 1) / q;
            while (e) {
                if (e & 1) r = r * b % p;
                b = b * b % p;
                e >>= 1;
            }
            if (r == 1) { ok = false; break; }
        }
        if (ok) { g_ = g; break; }
    }
    auto lg = std::make_shared<std::vector<std::uint32_t>>(p, 0);
    auto ex = std::make_shared<std::vector<Scalar>>(p - 1, 0);
    std::uint64_t x = 1;
    for (std::uint32_t k = 0; k + 1 < p; ++k) {
        (*ex)[k] = static_cast<Scalar>(x);
        (*lg)[x] = k;
        x = x * g_ % p;
    }
    log_ = lg;
    exp_ = ex;
}

Scalar PrimeField::inv(Scalar a) const {
    if (a == 0) throw MathError("division by zero in prime field");
    std::uint32_t l = (*log_)[a];
    return (*exp_)[(p_ - 1 - l) % (p_ - 1)];
}

Scalar PrimeField::pow(Scalar a, std::uint64_t e) const {
    std::uint64_t r = 1, b = a % p_;
    while (e) {
        if (e & 1) r = r * b % p_;
        b = b * b % p_;
        e >>= 1;
    }
    return static_cast<Scalar>(r);
}

Scalar PrimeField::from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Scalar>(r);
}

std::int64_t PrimeField::centered(Scalar a) const {
    return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : static_cast<std::int64_t>(a);
}

std::uint32_t PrimeField::log(Scalar a) const {
    if (a == 0) throw MathError("logarithm of zero");
    return (*log_)[a];
}

Scalar PrimeField::exp(std::int64_t e) const {
    std::int64_t m = p_ - 1;
    std::int64_t r = e % m;
    if (r < 0) r += m;
    return (*exp_)[r];
}

std::uint32_t PrimeField::order(Scalar a) const {
    std::uint32_t l = log(a);
    return (p_ - 1) / std::gcd(p_ - 1, l);
}

Scalar PrimeField::random(Rng& rng) const { return static_cast<Scalar>(rng() % p_); }

Scalar PrimeField::random_nonzero(Rng& rng) const {
    return static_cast<Scalar>(1 + rng() % (p_ - 1));
}

PrimeField choose_field(Family family, int N, int m) {
    if (m < 1 || N < 2) throw std::invalid_argument("choose_field needs m >= 1 and N >= 2");
    const std::uint64_t step = 2ULL * m;
    for (std::uint64_t p = step + 1; p < 1000000; p += step) {
        if (p <= 2ULL * N || !is_prime(p)) continue;
        if (family == Family::SL && p % N == 0) continue;
        return PrimeField(static_cast<std::uint32_t>(p));
    }
    throw MathError("no admissible prime below 10^6");
}

Scalar root_of_unity(const PrimeField& F, int d) {
    if (d < 1 || (F.p() - 1) % d != 0)
        throw MathError("no element of order " + std::to_string(d) + " in F_" +
                        std::to_string(F.p()));
    return F.exp((F.p() - 1) / d);
}

Mat Mat::identity(int n) {
    Mat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1;
    return I;
}

Mat Mat::diag(const Vec& d) {
    int n = static_cast<int>(d.size());
    Mat D(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = d[i];
    return D;
}

bool Mat::is_zero() const {
    return std::all_of(a.begin(), a.end(), [](Scalar x) { return x == 0; });
}

Mat mat_mul(const PrimeField& F, const Mat& A, const Mat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("dimension mismatch in product");
    Mat C(A.rows, B.cols);
    const std::uint64_t p = F.p();
    std::vector<std::uint64_t> acc(B.cols);
    for (int i = 0; i < A.rows; ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        for (int k = 0; k < A.cols; ++k) {
            std::uint64_t a = A(i, k);
            if (!a) continue;
            const Scalar* brow = &B.a[static_cast<std::size_t>(k) * B.cols];
            for (int j = 0; j < B.cols; ++j) {
                acc[j] += a * brow[j];
                if (acc[j] >= (1ULL << 62)) acc[j] %= p;
            }
        }
        for (int j = 0; j < B.cols; ++j) C(i, j) = static_cast<Scalar>(acc[j] % p);
    }
    return C;
}

Mat mat_add(const PrimeField& F, const Mat& A, const Mat& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("dimension mismatch");
    Mat C = A;
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = F.add(A.a[i], B.a[i]);
    return C;
}

Mat mat_sub(const PrimeField& F, const Mat& A, const Mat& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("dimension mismatch");
    Mat C = A;
    for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = F.sub(A.a[i], B.a[i]);
    return C;
}

Mat mat_scale(const PrimeField& F, const Mat& A, Scalar s) {
    Mat C = A;
    for (auto& x : C.a) x = F.mul(x, s);
    return C;
}

Mat mat_pow(const PrimeField& F, const Mat& A, std::uint64_t e) {
    if (!A.is_square()) throw std::invalid_argument("power of non-square matrix");
    Mat R = Mat::identity(A.rows), B = A;
    while (e) {
        if (e & 1) R = mat_mul(F, R, B);
        e >>= 1;
        if (e) B = mat_mul(F, B, B);
    }
    return R;
}

Mat transpose(const Mat& A) {
    Mat T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
    return T;
}

Mat commutator(const PrimeField& F, const Mat& A, const Mat& B) {
    return mat_sub(F, mat_mul(F, A, B), mat_mul(F, B, A));
}

Scalar trace(const PrimeField& F, const Mat& A) {
    Scalar t = 0;
    for (int i = 0; i < std::min(A.rows, A.cols); ++i) t = F.add(t, A(i, i));
    return t;
}

Scalar det(const PrimeField& F, const Mat& A) {
    if (!A.is_square()) throw std::invalid_argument("determinant of non-square matrix");
    Mat M = A;
    int n = M.rows;
    Scalar d = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (M(r, c)) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(M(piv, j), M(c, j));
            d = F.neg(d);
        }
        d = F.mul(d, M(c, c));
        Scalar iv = F.inv(M(c, c));
        for (int r = c + 1; r < n; ++r) {
            if (!M(r, c)) continue;
            Scalar f = F.mul(M(r, c), iv);
            for (int j = c; j < n; ++j) M(r, j) = F.sub(M(r, j), F.mul(f, M(c, j)));
        }
    }
    return d;
}

std::optional<Mat> inverse(const PrimeField& F, const Mat& A) {
    if (!A.is_square()) throw std::invalid_argument("inverse of non-square matrix");
    int n = A.rows;
    Mat M(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) M(i, j) = A(i, j);
        M(i, n + i) = 1;
    }
    auto piv = rref(F, M);
    if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
    Mat R(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R(i, j) = M(i, n + j);
    return R;
}

Mat inverse_or_throw(const PrimeField& F, const Mat& A) {
    auto r = inverse(F, A);
    if (!r) throw MathError("singular matrix");
    return *r;
}

Vec mat_vec(const PrimeField& F, const Mat& A, const Vec& x) {
    if (static_cast<int>(x.size()) != A.cols) throw std::invalid_argument("dimension mismatch");
    Vec y(A.rows, 0);
    for (int i = 0; i < A.rows; ++i) {
        std::uint64_t acc = 0;
        for (int j = 0; j < A.cols; ++j) acc = (acc + static_cast<std::uint64_t>(A(i, j)) * x[j]) % F.p();
        y[i] = static_cast<Scalar>(acc);
    }
    return y;
}

Vec flatten(const Mat& A) { return A.a; }

Mat unflatten(const Vec& v, int rows, int cols) {
    if (static_cast<int>(v.size()) != rows * cols) throw std::invalid_argument("bad flat size");
    Mat M(rows, cols);
    M.a = v;
    return M;
}

Mat random_mat(const PrimeField& F, int r, int c, Rng& rng) {
    Mat M(r, c);
    for (auto& x : M.a) x = F.random(rng);
    return M;
}

std::vector<int> rref(const PrimeField& F, Mat& A) {
    std::vector<int> pivots;
    int row = 0;
    for (int c = 0; c < A.cols && row < A.rows; ++c) {
        int piv = -1;
        for (int r = row; r < A.rows; ++r)
            if (A(r, c)) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < A.cols; ++j) std::swap(A(piv, j), A(row, j));
        Scalar iv = F.inv(A(row, c));
        for (int j = c; j < A.cols; ++j) A(row, j) = F.mul(A(row, j), iv);
        for (int r = 0; r < A.rows; ++r) {
            if (r == row || !A(r, c)) continue;
            Scalar f = A(r, c);
            for (int j = c; j < A.cols; ++j) A(r, j) = F.sub(A(r, j), F.mul(f, A(row, j)));
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

int rank(const PrimeField& F, const Mat& A) {
    Mat M = A;
    return static_cast<int>(rref(F, M).size());
}

std::vector<Vec> kernel_basis(const PrimeField& F, const Mat& A) {
    Mat M = A;
    auto piv = rref(F, M);
    std::vector<int> is_piv(A.cols, -1);
    for (std::size_t i = 0; i < piv.size(); ++i) is_piv[piv[i]] = static_cast<int>(i);
    std::vector<Vec> out;
    for (int f = 0; f < A.cols; ++f) {
        if (is_piv[f] >= 0) continue;
        Vec v(A.cols, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = F.neg(M(static_cast<int>(i), f));
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<Vec> solve(const PrimeField& F, const Mat& A, const Vec& rhs) {
    if (static_cast<int>(rhs.size()) != A.rows) throw std::invalid_argument("dimension mismatch");
    Mat M(A.rows, A.cols + 1);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) M(i, j) = A(i, j);
        M(i, A.cols) = rhs[i];
    }
    auto piv = rref(F, M);
    if (!piv.empty() && piv.back() == A.cols) return std::nullopt;
    Vec x(A.cols, 0);
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = M(static_cast<int>(i), A.cols);
    return x;
}

void upoly_trim(UPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int upoly_degree(const UPoly& f) { return static_cast<int>(f.size()) - 1; }

UPoly upoly_mul(const PrimeField& F, const UPoly& f, const UPoly& g) {
    if (f.empty() || g.empty()) return {};
    UPoly h(f.size() + g.size() - 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) h[i + j] = F.add(h[i + j], F.mul(f[i], g[j]));
    upoly_trim(h);
    return h;
}

UPoly upoly_sub(const PrimeField& F, const UPoly& f, const UPoly& g) {
    UPoly h(std::max(f.size(), g.size()), 0);
    for (std::size_t i = 0; i < f.size(); ++i) h[i] = f[i];
    for (std::size_t i = 0; i < g.size(); ++i) h[i] = F.sub(h[i], g[i]);
    upoly_trim(h);
    return h;
}

std::pair<UPoly, UPoly> upoly_divmod(const PrimeField& F, const UPoly& f, const UPoly& g) {
    UPoly gg = g;
    upoly_trim(gg);
    if (gg.empty()) throw MathError("polynomial division by zero");
    UPoly r = f;
    upoly_trim(r);
    if (r.size() < gg.size()) return {{}, r};
    UPoly q(r.size() - gg.size() + 1, 0);
    Scalar lead_inv = F.inv(gg.back());
    for (int k = static_cast<int>(r.size()) - static_cast<int>(gg.size()); k >= 0; --k) {
        Scalar c = F.mul(r[k + gg.size() - 1], lead_inv);
        q[k] = c;
        if (!c) continue;
        for (std::size_t j = 0; j < gg.size(); ++j) r[k + j] = F.sub(r[k + j], F.mul(c, gg[j]));
    }
    upoly_trim(q);
    upoly_trim(r);
    return {q, r};
}

UPoly upoly_gcd(const PrimeField& F, UPoly f, UPoly g) {
    upoly_trim(f);
    upoly_trim(g);
    while (!g.empty()) {
        auto r = upoly_divmod(F, f, g).second;
        f = std::move(g);
        g = std::move(r);
    }
    if (!f.empty()) {
        Scalar iv = F.inv(f.back());
        for (auto& c : f) c = F.mul(c, iv);
    }
    return f;
}

UPoly upoly_derivative(const PrimeField& F, const UPoly& f) {
    if (f.size() <= 1) return {};
    UPoly d(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) d[i - 1] = F.mul(f[i], F.from_int(static_cast<std::int64_t>(i)));
    upoly_trim(d);
    return d;
}

Mat upoly_eval_mat(const PrimeField& F, const UPoly& f, const Mat& A) {
    Mat R(A.rows, A.cols);
    for (int k = static_cast<int>(f.size()) - 1; k >= 0; --k) {
        R = mat_mul(F, R, A);
        for (int i = 0; i < A.rows; ++i) R(i, i) = F.add(R(i, i), f[k]);
    }
    return R;
}

UPoly min_poly(const PrimeField& F, const Mat& A) {
    if (!A.is_square()) throw std::invalid_argument("min_poly of non-square matrix");
    int n = A.rows;
    // first linear dependency among I, A, A^2, ... flattened
    std::vector<Vec> powers;
    Mat P = Mat::identity(n);
    for (int k = 0; k <= n; ++k) {
        powers.push_back(flatten(P));
        Mat M(n * n, k + 1);
        for (int j = 0; j <= k; ++j)
            for (int i = 0; i < n * n; ++i) M(i, j) = powers[j][i];
        auto ker = kernel_basis(F, M);
        if (!ker.empty()) {
            // the kernel is 1-dimensional at the first dependency
            UPoly mu = ker.front();
            upoly_trim(mu);
            Scalar iv = F.inv(mu.back());
            for (auto& c : mu) c = F.mul(c, iv);
            return mu;
        }
        P = mat_mul(F, P, A);
    }
    throw MathError("minimal polynomial search failed");
}

UPoly char_poly(const PrimeField& F, const Mat& A) {
    if (!A.is_square()) throw std::invalid_argument("char_poly of non-square matrix");
    // Hessenberg reduction followed by the standard recurrence
    int n = A.rows;
    Mat H = A;
    for (int c = 0; c + 2 < n + 0 && c < n - 1; ++c) {
        int piv = -1;
        for (int r = c + 1; r < n; ++r)
            if (H(r, c)) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != c + 1) {
            for (int j = 0; j < n; ++j) std::swap(H(piv, j), H(c + 1, j));
            for (int i = 0; i < n; ++i) std::swap(H(i, piv), H(i, c + 1));
        }
        Scalar iv = F.inv(H(c + 1, c));
        for (int r = c + 2; r < n; ++r) {
            Scalar f = F.mul(H(r, c), iv);
            if (!f) continue;
            for (int j = 0; j < n; ++j) H(r, j) = F.sub(H(r, j), F.mul(f, H(c + 1, j)));
            for (int i = 0; i < n; ++i) H(i, c + 1) = F.add(H(i, c + 1), F.mul(f, H(i, r)));
        }
    }
    std::vector<UPoly> p(n + 1);
    p[0] = {1};
    for (int k = 1; k <= n; ++k) {
        // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_{ik} prod_{j=i+1}^{k} h_{j,j-1} p_{i-1}
        UPoly lin = {F.neg(H(k - 1, k - 1)), 1};
        UPoly acc = upoly_mul(F, lin, p[k - 1]);
        Scalar prod = 1;
        for (int i = k - 1; i >= 1; --i) {
            prod = F.mul(prod, H(i, i - 1));
            if (!prod) break;
            Scalar coef = F.mul(prod, H(i - 1, k - 1));
            UPoly term = p[i - 1];
            for (auto& c : term) c = F.mul(c, coef);
            acc = upoly_sub(F, acc, term);
        }
        upoly_trim(acc);
        p[k] = acc;
    }
    return p[n];
}

bool is_semisimple(const PrimeField& F, const Mat& A) {
    UPoly mu = min_poly(F, A);
    UPoly g = upoly_gcd(F, mu, upoly_derivative(F, mu));
    return g.size() == 1;
}

bool is_nilpotent(const PrimeField& F, const Mat& A) {
    if (!A.is_square()) throw std::invalid_argument("is_nilpotent of non-square matrix");
    return mat_pow(F, A, static_cast<std::uint64_t>(A.rows)).is_zero();
}

std::pair<Mat, Mat> jordan_parts(const PrimeField& F, const Mat& A) {
    if (!A.is_square()) throw std::invalid_argument("jordan_parts of non-square matrix");
    if (F.p() <= static_cast<std::uint32_t>(A.rows))
        throw MathError("Frobenius stabilization needs p > matrix size");
    // X_k = A^{p^k}; for k >= 1 the nilpotent part is gone and the sequence is periodic
    Mat first = mat_pow(F, A, F.p());
    Mat cur = first;
    for (int f = 1; f <= 100000; ++f) {
        Mat next = mat_pow(F, cur, F.p());
        if (next == first) {
            Mat n = mat_sub(F, A, cur);
            return {cur, n};
        }
        cur = std::move(next);
    }
    throw MathError("Frobenius orbit did not close");
}

std::vector<Vec> echelon_basis(const PrimeField& F, const std::vector<Vec>& vs, int n) {
    Mat M(static_cast<int>(vs.size()), n);
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (int j = 0; j < n; ++j) M(static_cast<int>(i), j) = vs[i][j];
    auto piv = rref(F, M);
    std::vector<Vec> out;
    for (std::size_t i = 0; i < piv.size(); ++i)
        out.emplace_back(M.a.begin() + static_cast<long>(i) * n, M.a.begin() + static_cast<long>(i + 1) * n);
    return out;
}

int span_dim(const PrimeField& F, const std::vector<Vec>& vs, int n) {
    return static_cast<int>(echelon_basis(F, vs, n).size());
}

bool in_span(const PrimeField& F, const std::vector<Vec>& basis, const Vec& v) {
    int n = static_cast<int>(v.size());
    auto all = basis;
    all.push_back(v);
    return span_dim(F, all, n) == span_dim(F, basis, n);
}

std::vector<Vec> intersect(const PrimeField& F, const std::vector<Vec>& a,
                           const std::vector<Vec>& b, int n) {
    // x = sum s_i a_i = sum t_j b_j
    int ka = static_cast<int>(a.size()), kb = static_cast<int>(b.size());
    if (ka == 0 || kb == 0) return {};
    Mat M(n, ka + kb);
    for (int i = 0; i < ka; ++i)
        for (int r = 0; r < n; ++r) M(r, i) = a[i][r];
    for (int j = 0; j < kb; ++j)
        for (int r = 0; r < n; ++r) M(r, ka + j) = F.neg(b[j][r]);
    std::vector<Vec> out;
    for (auto& k : kernel_basis(F, M)) {
        Vec x(n, 0);
        for (int i = 0; i < ka; ++i)
            for (int r = 0; r < n; ++r) x[r] = F.add(x[r], F.mul(k[i], a[i][r]));
        out.push_back(std::move(x));
    }
    return echelon_basis(F, out, n);
}

Coordinates::Coordinates(const PrimeField& F, std::vector<Vec> basis, int n)
    : F_(F), basis_(std::move(basis)), n_(n) {
    int k = dim();
    // rows = basis vectors; reduce [B | I] to read pivot columns and back-substitution
    Mat M(k, n + k);
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(basis_[i].size()) != n) throw std::invalid_argument("bad basis length");
        for (int j = 0; j < n; ++j) M(i, j) = basis_[i][j];
        M(i, n + i) = 1;
    }
    auto piv = rref(F, M);
    if (static_cast<int>(piv.size()) < k || (k > 0 && piv[k - 1] >= n))
        throw MathError("coordinate basis is linearly dependent");
    pivots_.assign(piv.begin(), piv.begin() + k);
    back_ = Mat(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) back_(i, j) = M(i, n + j);
}

Vec Coordinates::coords(const Vec& v) const {
    // row i of RREF = sum_j back(i,j) basis_j, with 1 at pivot i; so v = sum_i v[piv_i] row_i
    int k = dim();
    Vec c(k, 0);
    for (int i = 0; i < k; ++i) {
        Scalar y = v[pivots_[i]];
        if (!y) continue;
        for (int j = 0; j < k; ++j) c[j] = F_->add(c[j], F_->mul(y, back_(i, j)));
    }
    return c;
}

std::optional<Vec> Coordinates::try_coords(const Vec& v) const {
    Vec c = coords(v);
    if (combine(c) != v) return std::nullopt;
    return c;
}

Vec Coordinates::combine(const Vec& c) const {
    Vec v(n_, 0);
    for (int i = 0; i < dim(); ++i) {
        if (!c[i]) continue;
        for (int j = 0; j < n_; ++j) v[j] = F_->add(v[j], F_->mul(c[i], basis_[i][j]));
    }
    return v;
}

MPoly MPoly::constant(int nvars, Scalar c) {
    MPoly f(nvars);
    if (c) f.terms_[Exponent(nvars, 0)] = c;
    return f;
}

MPoly MPoly::variable(int nvars, int var) {
    if (var < 0 || var >= nvars) throw std::out_of_range("variable index out of range");
    MPoly f(nvars);
    Exponent e(nvars, 0);
    e[var] = 1;
    f.terms_[e] = 1;
    return f;
}

int MPoly::total_degree() const {
    int d = -1;
    for (auto& [e, c] : terms_) {
        int s = 0;
        for (auto x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

Scalar MPoly::coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0 : it->second;
}

void MPoly::add_term(const PrimeField& F, const Exponent& e, Scalar c) {
    if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("exponent length mismatch");
    if (!c) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
        it->second = F.add(it->second, c);
        if (!it->second) terms_.erase(it);
    }
}

MPoly poly_add(const PrimeField& F, const MPoly& a, const MPoly& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("nvars mismatch");
    MPoly r = a;
    for (auto& [e, c] : b.terms()) r.add_term(F, e, c);
    return r;
}

MPoly poly_sub(const PrimeField& F, const MPoly& a, const MPoly& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("nvars mismatch");
    MPoly r = a;
    for (auto& [e, c] : b.terms()) r.add_term(F, e, F.neg(c));
    return r;
}

MPoly poly_mul(const PrimeField& F, const MPoly& a, const MPoly& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("nvars mismatch");
    MPoly r(a.nvars());
    MPoly::Exponent e(a.nvars());
    for (auto& [ea, ca] : a.terms())
        for (auto& [eb, cb] : b.terms()) {
            for (int i = 0; i < a.nvars(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
            r.add_term(F, e, F.mul(ca, cb));
        }
    return r;
}

MPoly poly_scale(const PrimeField& F, const MPoly& a, Scalar s) {
    MPoly r(a.nvars());
    for (auto& [e, c] : a.terms()) r.add_term(F, e, F.mul(c, s));
    return r;
}

MPoly partial_derivative(const PrimeField& F, const MPoly& f, int var) {
    if (var < 0 || var >= f.nvars()) throw std::out_of_range("variable index out of range");
    MPoly r(f.nvars());
    for (auto& [e, c] : f.terms()) {
        if (!e[var]) continue;
        auto d = e;
        d[var] = static_cast<std::uint16_t>(d[var] - 1);
        r.add_term(F, d, F.mul(c, F.from_int(e[var])));
    }
    return r;
}

Scalar evaluate(const PrimeField& F, const MPoly& f, const Vec& point) {
    if (static_cast<int>(point.size()) != f.nvars()) throw std::invalid_argument("point length mismatch");
    Scalar s = 0;
    for (auto& [e, c] : f.terms()) {
        Scalar t = c;
        for (int i = 0; i < f.nvars() && t; ++i)
            if (e[i]) t = F.mul(t, F.pow(point[i], e[i]));
        s = F.add(s, t);
    }
    return s;
}

Mat jacobian_at(const PrimeField& F, const std::vector<MPoly>& fs, const Vec& point) {
    int k = static_cast<int>(fs.size());
    int n = static_cast<int>(point.size());
    Mat J(k, n);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) J(i, j) = evaluate(F, partial_derivative(F, fs[i], j), point);
    return J;
}

MPoly substitute(const PrimeField& F, const MPoly& f, const std::vector<MPoly>& images) {
    if (static_cast<int>(images.size()) != f.nvars()) throw std::invalid_argument("substitution arity");
    int nv = images.empty() ? 0 : images.front().nvars();
    MPoly r(nv);
    // cache powers of the images
    std::vector<std::vector<MPoly>> pw(images.size());
    for (auto& [e, c] : f.terms()) {
        MPoly t = MPoly::constant(nv, c);
        for (std::size_t i = 0; i < images.size(); ++i) {
            if (!e[i]) continue;
            auto& cache = pw[i];
            if (cache.empty()) cache.push_back(MPoly::constant(nv, 1));
            while (cache.size() <= e[i]) cache.push_back(poly_mul(F, cache.back(), images[i]));
            t = poly_mul(F, t, cache[e[i]]);
        }
        r = poly_add(F, r, t);
    }
    return r;
}

UPoly cyclotomic_upoly(int d, const PrimeField& F) {
    if (d < 1) throw std::invalid_argument("cyclotomic index must be positive");
    if (d % F.p() == 0) throw MathError("cyclotomic polynomial has repeated roots when p | d");
    // Phi_d = (x^d - 1) / prod_{e | d, e < d} Phi_e
    UPoly num(d + 1, 0);
    num[0] = F.neg(1);
    num[d] = 1;
    for (int e = 1; e < d; ++e) {
        if (d % e) continue;
        auto qr = upoly_divmod(F, num, cyclotomic_upoly(e, F));
        num = qr.first;
    }
    return num;
}

MPoly cyclotomic_mod_p(int d, const PrimeField& F) {
    UPoly u = cyclotomic_upoly(d, F);
    MPoly f(1);
    for (std::size_t i = 0; i < u.size(); ++i)
        f.add_term(F, {static_cast<std::uint16_t>(i)}, u[i]);
    return f;
}

UPoly to_upoly(const MPoly& f) {
    if (f.nvars() != 1) throw std::invalid_argument("not univariate");
    UPoly u;
    for (auto& [e, c] : f.terms()) {
        if (u.size() <= e[0]) u.resize(e[0] + 1, 0);
        u[e[0]] = c;
    }
    upoly_trim(u);
    return u;
}

std::string upoly_to_string(const UPoly& f) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
    os << "]";
    return os.str();
}

}  // namespace tg
