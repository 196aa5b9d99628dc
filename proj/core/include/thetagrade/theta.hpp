#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thetagrade/classical.hpp"
#include "thetagrade/exactlin.hpp"

namespace tg {

struct InvalidSpec : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct AutomorphismSpec {
    GroupType type;
    bool outer = false;
    Mat nw;
    int m = 1;
    // Weyl element of nw when known; used for cycle-shape checks
    std::optional<WeylElement> w;
};

// X -> nw X nw^-1, or X -> -nw X^T nw^-1 for outer specs
Mat dtheta_apply(const PrimeField& F, const AutomorphismSpec& spec, const Mat& X);
// g -> nw g nw^-1, or g -> nw g^-T nw^-1
Mat theta_group(const PrimeField& F, const AutomorphismSpec& spec, const Mat& g);
void validate_spec(const PrimeField& F, const AutomorphismSpec& spec);

// dim g x dim g matrix; column k holds the coordinates of dtheta(basis_k)
Mat dtheta_operator(const PrimeField& F, const AutomorphismSpec& spec, const AlgebraBasis& alg);
bool is_lie_automorphism(const PrimeField& F, const AlgebraBasis& alg, const Mat& op);
bool preserves_trace_form(const PrimeField& F, const AlgebraBasis& alg, const Mat& op);
int order_of(const PrimeField& F, const Mat& op, int cap);

struct Grading {
    int m = 1;
    Scalar zeta = 1;
    // coordinate vectors in the algebra basis, reduced echelon
    std::vector<std::vector<Vec>> pieces;

    std::vector<int> dims() const;
    int total_dim() const;
    const std::vector<Vec>& piece(int i) const { return pieces[((i % m) + m) % m]; }
};

Grading compute_grading(const PrimeField& F, const Mat& op, int m);
std::vector<Mat> piece_matrices(const AlgebraBasis& alg, const Grading& gr, int i);
bool bracket_compatible(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr);
// which piece contains X, or -1 if X is not homogeneous
int degree_of(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr, const Mat& X);
Mat random_in_piece(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr, int i, Rng& rng);

struct KawanakaOrbit {
    std::vector<int> roots;
    int length = 0;
    Scalar product = 1;  // C
    int order = 1;       // order of C
    int dim_in_g1 = 0;
    bool product_identity = false;  // C^{m/l} = 1
    bool exact_rule = false;        // dim = 1 iff C = zeta^l
    bool order_rule = false;        // dim = 1 iff order of C is m/l
};

struct KawanakaReport {
    std::vector<Scalar> constant;  // c(alpha) per root
    std::vector<int> image;        // root index of the image of alpha
    std::vector<KawanakaOrbit> orbits;
    bool inverse_pairs = false;    // c(alpha) c(-alpha) = 1 everywhere
    bool dims_zero_one = false;
    bool all_exact = false;
    bool all_order_rule = false;
    bool all_products = false;
};

KawanakaReport kawanaka_constants(const PrimeField& F, const AutomorphismSpec& spec,
                                  const AlgebraBasis& alg, const TorusData& torus,
                                  const Grading& gr);

// case label of the automorphism: 1, 2I, 2II, 2III, 3I, 3II, 3III, 4I, 4II, 4III
std::string classify_case(const PrimeField& F, const AutomorphismSpec& spec);

// nw gamma(nw) = nw nw^-T for outer specs
Mat outer_square(const PrimeField& F, const Mat& nw);

}  // namespace tg
