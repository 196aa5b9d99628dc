#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "thetagrade/exactlin.hpp"
#include "thetagrade/family.hpp"

namespace tg {

struct GroupType {
    Family family = Family::SL;
    int n = 1;  // rank parameter
    int N = 1;  // matrix size

    static GroupType make(Family f, int n);
    int expected_dim() const;
    int torus_dim() const;
    // number of coordinates a Weyl element permutes
    int weyl_degree() const { return n; }
    bool signed_weyl() const { return has_form(family); }
    std::string name() const;
};

// J for SO/Sp, empty matrix for SL/GL
Mat form_matrix(const PrimeField& F, const GroupType& type);
// partner index i' = N-1-i
inline int partner(const GroupType& t, int i) { return t.N - 1 - i; }

bool in_algebra(const PrimeField& F, const GroupType& type, const Mat& X);
bool in_group(const PrimeField& F, const GroupType& type, const Mat& g);
// O(2n) membership for SO_even, same as in_group otherwise
bool in_full_isometry_group(const PrimeField& F, const GroupType& type, const Mat& g);

struct AlgebraBasis {
    GroupType type;
    std::vector<Mat> basis;
    Coordinates coords;

    int dim() const { return static_cast<int>(basis.size()); }
    Vec to_coords(const Mat& X) const { return coords.coords(flatten(X)); }
    std::optional<Vec> try_coords(const Mat& X) const { return coords.try_coords(flatten(X)); }
    Mat element(const Vec& c) const { return unflatten(coords.combine(c), type.N, type.N); }
};

AlgebraBasis build_algebra(const PrimeField& F, const GroupType& type);
bool bracket_closed(const PrimeField& F, const AlgebraBasis& alg);

Scalar trace_form(const PrimeField& F, const Mat& X, const Mat& Y);
Mat gram_matrix(const PrimeField& F, const AlgebraBasis& alg);
bool nondegeneracy_check(const PrimeField& F, const AlgebraBasis& alg);

struct Root {
    int row = 0;  // leading matrix position of the root vector
    int col = 0;
    Mat vector;
    std::vector<int> weight;  // integer coefficients on the torus coordinates
};

struct TorusData {
    std::vector<Mat> basis;
    std::vector<Root> roots;
    // matrix positions that carry the diagonal coordinates
    std::map<std::pair<int, int>, int> root_at;

    // value of root k on a diagonal matrix
    Scalar evaluate(const PrimeField& F, int k, const Mat& h) const;
    int find_root(const PrimeField& F, const Mat& Y, Scalar* scale = nullptr) const;
    int negative(int k) const;
};

TorusData diagonal_torus(const PrimeField& F, const GroupType& type);

struct WeylElement {
    std::vector<int> perm;
    std::vector<int> sign;  // +1 or -1 per coordinate

    static WeylElement identity(int n);
    int degree() const { return static_cast<int>(perm.size()); }
    WeylElement compose(const WeylElement& rhs) const;  // (this * rhs)(j) = this(rhs(j))
    WeylElement inverse() const;
    int flips() const;
    bool operator==(const WeylElement&) const = default;
    auto operator<=>(const WeylElement&) const = default;
};

// cycles given as (length, negative) laid out on consecutive coordinates
WeylElement weyl_from_cycles(const std::vector<std::pair<int, bool>>& cycles);
std::vector<WeylElement> enumerate_weyl(const GroupType& type);
bool is_rotation(const WeylElement& w);

struct LiftFeasibility : MathError {
    using MathError::MathError;
};

// monomial matrix acting as w on the diagonal torus; torus_part scales the image of each coordinate
Mat monomial_lift(const PrimeField& F, const GroupType& type, const WeylElement& w,
                  const Vec& torus_part);
// adjusts the lift into G; SO_even with an odd number of negative cycles is only
// possible in O(2n) and requires allow_orthogonal
Mat lift_weyl(const PrimeField& F, const GroupType& type, const WeylElement& w,
              const Vec& torus_part, bool allow_orthogonal = false);
// lift with the standard sign normalization of positive cycles
Mat normal_lift(const PrimeField& F, const GroupType& type, const WeylElement& w,
                const Vec& torus_part, bool allow_orthogonal = false);

// action of a monomial matrix on the torus coordinates, if it normalizes T
std::optional<WeylElement> weyl_of(const PrimeField& F, const GroupType& type, const Mat& g);

std::vector<Mat> center_elements(const PrimeField& F, const GroupType& type);

}  // namespace tg
