#pragma once

#include <string>
#include <vector>

#include "thetagrade/classical.hpp"
#include "thetagrade/exactlin.hpp"
#include "thetagrade/theta.hpp"

namespace tg {

struct CartanSubspace {
    std::vector<Mat> basis;
    int r() const { return static_cast<int>(basis.size()); }
};

// ad x as a dim g x dim g matrix in algebra coordinates
Mat ad_matrix(const PrimeField& F, const AlgebraBasis& alg, const Mat& x);
// {y in span(target) : [y, s] = 0 for all s in S}, target and result as algebra coordinates
std::vector<Vec> centralizer_in(const PrimeField& F, const AlgebraBasis& alg, const std::vector<Mat>& S,
                                const std::vector<Vec>& target);
std::vector<Vec> all_coords(const AlgebraBasis& alg);
std::vector<Vec> center_of(const PrimeField& F, const AlgebraBasis& alg);
std::vector<Vec> coords_of(const AlgebraBasis& alg, const std::vector<Mat>& mats);

struct CartanCheck {
    bool in_g1 = false;
    bool commuting = false;
    bool semisimple = false;
    bool maximal = false;
    bool ok() const { return in_g1 && commuting && semisimple && maximal; }
};

CartanCheck check_cartan(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr,
                         const CartanSubspace& c, std::uint64_t seed);

// cycle-block construction from the Weyl element of the automorphism
CartanSubspace explicit_cartan(const PrimeField& F, const AutomorphismSpec& spec, const Grading& gr);
// split: keep only semisimple samples with all eigenvalues in the prime field
CartanSubspace brute_cartan(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr,
                            std::uint64_t seed, int budget, bool split = false);

struct FittingPair {
    std::vector<Vec> zero_part;
    std::vector<Vec> one_part;
    Mat generic;
};

FittingPair fitting(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr,
                    const std::vector<Mat>& h, std::uint64_t seed);

struct TorusPiece {
    int d = 1;
    std::vector<Vec> basis;  // algebra coordinates
    bool matches_grading = false;
};

struct TorusLieDecomposition {
    std::vector<TorusPiece> pieces;
    int torus_dim = 0;
    bool spans = false;
    int dim_of(int d) const;
};

TorusLieDecomposition torus_decomposition(const PrimeField& F, const AlgebraBasis& alg,
                                          const std::vector<Mat>& torus_basis, const Mat& op,
                                          const Grading& gr);
int euler_phi(int n);

Mat general_position(const PrimeField& F, const AlgebraBasis& alg, const CartanSubspace& c,
                     std::uint64_t seed);

struct ZeroRankReport {
    int central_dim = 0;
    int samples = 0;
    int nilpotent = 0;
    bool zero_rank() const { return samples > 0 && nilpotent == samples; }
};

ZeroRankReport zero_rank_check(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr,
                               std::uint64_t seed, int samples = 200);

}  // namespace tg
