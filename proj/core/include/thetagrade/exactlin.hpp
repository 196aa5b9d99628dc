#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "thetagrade/family.hpp"

namespace tg {

using Scalar = std::uint32_t;
using Vec = std::vector<Scalar>;
using Rng = std::mt19937_64;

struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class PrimeField {
public:
    explicit PrimeField(std::uint32_t p);

    std::uint32_t p() const { return p_; }
    Scalar generator() const { return g_; }

    Scalar add(Scalar a, Scalar b) const { Scalar s = a + b; return s >= p_ ? s - p_ : s; }
    Scalar sub(Scalar a, Scalar b) const { return a >= b ? a - b : a + p_ - b; }
    Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
    Scalar mul(Scalar a, Scalar b) const {
        return static_cast<Scalar>((static_cast<std::uint64_t>(a) * b) % p_);
    }
    Scalar inv(Scalar a) const;
    Scalar div(Scalar a, Scalar b) const { return mul(a, inv(b)); }
    Scalar pow(Scalar a, std::uint64_t e) const;
    Scalar from_int(std::int64_t v) const;
    // representative in (-p/2, p/2]
    std::int64_t centered(Scalar a) const;

    // discrete log base generator(), table driven
    std::uint32_t log(Scalar a) const;
    Scalar exp(std::int64_t e) const;
    std::uint32_t order(Scalar a) const;

    Scalar random(Rng& rng) const;
    Scalar random_nonzero(Rng& rng) const;

private:
    std::uint32_t p_;
    Scalar g_;
    std::shared_ptr<const std::vector<std::uint32_t>> log_;
    std::shared_ptr<const std::vector<Scalar>> exp_;
};

bool is_prime(std::uint64_t n);

PrimeField choose_field(Family family, int N, int m);
Scalar root_of_unity(const PrimeField& F, int d);

// dense matrices, row major
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<Scalar> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

    Scalar& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    Scalar operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static Mat identity(int n);
    static Mat diag(const Vec& d);
    bool is_zero() const;
    bool is_square() const { return rows == cols; }
    bool operator==(const Mat& o) const = default;
    auto operator<=>(const Mat& o) const = default;
};

Mat mat_mul(const PrimeField& F, const Mat& A, const Mat& B);
Mat mat_add(const PrimeField& F, const Mat& A, const Mat& B);
Mat mat_sub(const PrimeField& F, const Mat& A, const Mat& B);
Mat mat_scale(const PrimeField& F, const Mat& A, Scalar s);
Mat mat_pow(const PrimeField& F, const Mat& A, std::uint64_t e);
Mat transpose(const Mat& A);
Mat commutator(const PrimeField& F, const Mat& A, const Mat& B);
Scalar trace(const PrimeField& F, const Mat& A);
Scalar det(const PrimeField& F, const Mat& A);
std::optional<Mat> inverse(const PrimeField& F, const Mat& A);
Mat inverse_or_throw(const PrimeField& F, const Mat& A);
Vec mat_vec(const PrimeField& F, const Mat& A, const Vec& x);
Vec flatten(const Mat& A);
Mat unflatten(const Vec& v, int rows, int cols);
Mat random_mat(const PrimeField& F, int r, int c, Rng& rng);

// row reduction; returns pivot columns, reduces A in place to RREF
std::vector<int> rref(const PrimeField& F, Mat& A);
int rank(const PrimeField& F, const Mat& A);
// basis of {x : A x = 0}, one vector per free column, ascending
std::vector<Vec> kernel_basis(const PrimeField& F, const Mat& A);
std::optional<Vec> solve(const PrimeField& F, const Mat& A, const Vec& rhs);

// univariate polynomials, coefficient of x^i at index i, trimmed
using UPoly = std::vector<Scalar>;
void upoly_trim(UPoly& f);
UPoly upoly_mul(const PrimeField& F, const UPoly& f, const UPoly& g);
UPoly upoly_sub(const PrimeField& F, const UPoly& f, const UPoly& g);
// returns (quotient, remainder)
std::pair<UPoly, UPoly> upoly_divmod(const PrimeField& F, const UPoly& f, const UPoly& g);
UPoly upoly_gcd(const PrimeField& F, UPoly f, UPoly g);
UPoly upoly_derivative(const PrimeField& F, const UPoly& f);
Mat upoly_eval_mat(const PrimeField& F, const UPoly& f, const Mat& A);
int upoly_degree(const UPoly& f);

UPoly min_poly(const PrimeField& F, const Mat& A);
UPoly char_poly(const PrimeField& F, const Mat& A);
bool is_semisimple(const PrimeField& F, const Mat& A);
bool is_nilpotent(const PrimeField& F, const Mat& A);
// Jordan decomposition A = s + n via Frobenius-power stabilization
std::pair<Mat, Mat> jordan_parts(const PrimeField& F, const Mat& A);

// subspaces of F^n given by spanning lists
std::vector<Vec> echelon_basis(const PrimeField& F, const std::vector<Vec>& vs, int n);
int span_dim(const PrimeField& F, const std::vector<Vec>& vs, int n);
bool in_span(const PrimeField& F, const std::vector<Vec>& basis, const Vec& v);
std::vector<Vec> intersect(const PrimeField& F, const std::vector<Vec>& a,
                           const std::vector<Vec>& b, int n);

// coordinates relative to a fixed linearly independent list
class Coordinates {
public:
    Coordinates() = default;
    Coordinates(const PrimeField& F, std::vector<Vec> basis, int n);
    int dim() const { return static_cast<int>(basis_.size()); }
    int ambient() const { return n_; }
    const std::vector<Vec>& basis() const { return basis_; }
    // coordinates of v assuming v lies in the span
    Vec coords(const Vec& v) const;
    std::optional<Vec> try_coords(const Vec& v) const;
    Vec combine(const Vec& c) const;

private:
    std::optional<PrimeField> F_;
    std::vector<Vec> basis_;
    int n_ = 0;
    std::vector<int> pivots_;
    Mat back_;  // dim x dim
};

// sparse multivariate polynomials
class MPoly {
public:
    using Exponent = std::vector<std::uint16_t>;

    MPoly() = default;
    explicit MPoly(int nvars) : nvars_(nvars) {}

    static MPoly constant(int nvars, Scalar c);
    static MPoly variable(int nvars, int var);

    int nvars() const { return nvars_; }
    const std::map<Exponent, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int total_degree() const;
    Scalar coefficient(const Exponent& e) const;

    void add_term(const PrimeField& F, const Exponent& e, Scalar c);

    bool operator==(const MPoly& o) const = default;

private:
    int nvars_ = 0;
    std::map<Exponent, Scalar> terms_;
};

MPoly poly_add(const PrimeField& F, const MPoly& a, const MPoly& b);
MPoly poly_sub(const PrimeField& F, const MPoly& a, const MPoly& b);
MPoly poly_mul(const PrimeField& F, const MPoly& a, const MPoly& b);
MPoly poly_scale(const PrimeField& F, const MPoly& a, Scalar s);
MPoly partial_derivative(const PrimeField& F, const MPoly& f, int var);
Scalar evaluate(const PrimeField& F, const MPoly& f, const Vec& point);
Mat jacobian_at(const PrimeField& F, const std::vector<MPoly>& fs, const Vec& point);
// substitute var_j -> images[j] (polynomials in a common ring)
MPoly substitute(const PrimeField& F, const MPoly& f, const std::vector<MPoly>& images);

MPoly cyclotomic_mod_p(int d, const PrimeField& F);
UPoly cyclotomic_upoly(int d, const PrimeField& F);
UPoly to_upoly(const MPoly& f);

std::string upoly_to_string(const UPoly& f);

}  // namespace tg
