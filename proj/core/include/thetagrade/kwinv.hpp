#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thetagrade/cartan.hpp"
#include "thetagrade/littleweyl.hpp"
#include "thetagrade/scenario.hpp"

namespace tg {

// matrices with polynomial entries
using PolyMat = std::vector<std::vector<MPoly>>;

// base + sum_j s_j dirs[j], entries in dirs.size() variables
PolyMat affine_matrix(const PrimeField& F, const Mat& base, const std::vector<Mat>& dirs);

// coefficients c_1..c_N of det(x I - A) = x^N + c_1 x^(N-1) + ... + c_N
std::vector<MPoly> char_coefficients(const PrimeField& F, const PolyMat& A);
MPoly pfaffian(const PrimeField& F, const PolyMat& A);
Scalar pfaffian(const PrimeField& F, Mat A);

struct InvariantFamily {
    GroupType type;
    std::vector<int> degrees;      // ascending
    std::vector<int> coefficient;  // char-poly index per generator, 0 for the Pfaffian of XJ
    std::vector<MPoly> generators; // in algebra coordinates; empty unless materialized
    // Pfaffian of (X right) on the support indices; empty means the standard J on all indices
    Mat right;
    std::vector<int> support;

    int size() const { return static_cast<int>(degrees.size()); }
};

// degrees and generator choice without symbolic expansion
InvariantFamily invariant_family(const GroupType& type);
// symbolic generators in the coordinates of alg
InvariantFamily invariant_generators(const PrimeField& F, const AlgebraBasis& alg);

std::vector<Scalar> invariant_values(const PrimeField& F, const InvariantFamily& fam, const Mat& X);
// generators on base + span(dirs), as polynomials in dirs.size() variables
std::vector<MPoly> restrict_affine(const PrimeField& F, const InvariantFamily& fam, const Mat& base,
                                   const std::vector<Mat>& dirs);
std::vector<MPoly> restrict_to(const PrimeField& F, const InvariantFamily& fam, const std::vector<Mat>& dirs);

// greedy choice of polynomials whose gradients at point are independent
std::vector<int> independent_at(const PrimeField& F, const std::vector<MPoly>& fs, const Vec& point);

struct ChevalleyReport {
    bool invariant = false;
    bool independent = false;
    bool degrees_match = false;
    std::vector<int> selected;
    std::vector<int> degrees;
    std::vector<MPoly> restricted;
    bool ok() const { return invariant && independent && degrees_match; }
};

ChevalleyReport chevalley_check(const PrimeField& F, const InvariantFamily& fam, const CartanSubspace& c,
                                const LittleWeylGroup& wc, const std::vector<int>& expected_degrees,
                                std::uint64_t seed);

struct ReductionSubgroup {
    std::string row;         // case of G
    GroupType type;          // type of L
    std::string restricted;  // expected case family of theta on L: "1".."4"
    std::vector<Vec> basis;  // l inside g, algebra coordinates
    bool contains_c = false;
    bool theta_stable = false;
    bool closed = false;
    bool dim_ok = false;
    std::vector<int> dims;  // graded pieces of l
    InvariantFamily family; // generators of L acting on matrices of g
    bool ok() const { return contains_c && theta_stable && closed && dim_ok; }
};

ReductionSubgroup reduction_subgroup(const Session& s, const CartanSubspace& c, const EigenFlags& flags,
                                 const GmqrLabel& predicted);

// L with theta = Int t (or its outer and special variants) and the listed e
struct NormalizedPosition {
    AutomorphismSpec spec;
    AlgebraBasis alg;
    TorusData torus;
    Mat op;
    Grading grading;
    std::string case_label;
    Mat e;
    bool e_in_g1 = false;
    int centralizer_dim = 0;  // of e in l
    bool regular() const { return centralizer_dim == spec.type.torus_dim(); }
};

NormalizedPosition regular_nilpotent(const PrimeField& F, const std::string& row, const GroupType& L, int m,
                                     int r, Scalar zeta, Scalar xi);
// r = 0: theta as given, e the sum of simple root vectors
NormalizedPosition zero_rank_position(const Session& s);

// diagonal h with [h, e] = 2e, free of the center; entries as small integers
std::optional<Mat> associated_cocharacter(const PrimeField& F, const NormalizedPosition& pos);

struct KWSection {
    Mat e;
    Mat h;
    std::vector<Mat> u;
    std::vector<int> weights;  // ad h weight of each u vector
    int image_dim = 0;         // dim [g(0), e]
    int g1_dim = 0;
    int r() const { return static_cast<int>(u.size()); }
};

KWSection build_section(const PrimeField& F, const NormalizedPosition& pos, const Mat& h);

struct SectionCheck {
    std::vector<int> selected;
    std::vector<int> degrees;  // of the selected generators
    bool selection = false;
    bool jacobian_at_e = false;
    int jacobian_points = 0;
    int jacobian_nonsingular = 0;
    int samples = 0;
    int distinct_points = 0;
    int collisions = 0;
    bool weighted = false;
    std::optional<Vec> witness;
    bool ok() const {
        return selection && jacobian_at_e && jacobian_nonsingular * 100 >= 95 * jacobian_points &&
               collisions == 0 && weighted;
    }
};

SectionCheck verify_section(const PrimeField& F, const InvariantFamily& fam, const KWSection& sec,
                            std::uint64_t seed, int jacobian_points = 100, int samples = 10000);

// sum_{k<N} x^k / k!; throws std::invalid_argument unless x^N = 0
Mat exp_nilpotent(const PrimeField& F, const Mat& x);

// unipotent elements of G(0) built from nilpotent elements of g(0)
std::vector<Mat> g0_unipotents(const PrimeField& F, const AlgebraBasis& alg, const AutomorphismSpec& spec,
                               const Grading& gr, int count, std::uint64_t seed);

struct InvarianceReport {
    int conjugations = 0;
    int nontrivial = 0;
    bool fixed = false;  // every U is theta-fixed and in G
    bool invariant = false;
    bool ok() const { return fixed && invariant; }
};

InvarianceReport g0_invariance(const PrimeField& F, const InvariantFamily& fam, const AlgebraBasis& alg,
                               const AutomorphismSpec& spec, const Grading& gr, std::uint64_t seed,
                               int count = 50);

struct NilpotentReport {
    int samples = 0;
    int nonzero = 0;
    bool all_nilpotent = false;
    bool vanish = false;
    bool ok() const { return all_nilpotent && vanish; }
};

// nilpotent elements of g(1) from the positive ad h part, moved by G(0)
NilpotentReport nilpotent_vanishing(const PrimeField& F, const InvariantFamily& fam,
                                    const NormalizedPosition& pos, const Mat& h, std::uint64_t seed,
                                    int samples = 100);

// dim [g(0), x]
int orbit_dim(const PrimeField& F, const AlgebraBasis& alg, const Grading& gr, const Mat& x);

struct FiberReport {
    int expected = 0;  // dim g(1) - r
    int samples = 0;
    int matching = 0;
    bool ok() const { return samples > 0 && matching == samples; }
};

FiberReport fiber_dimension(const Session& s, const CartanSubspace& c, std::uint64_t seed, int samples = 20);

struct KWReport {
    ReductionSubgroup sub;
    NormalizedPosition pos;
    std::optional<Mat> h;
    bool h_bracket = false;
    bool h_fixed = false;
    KWSection section;
    bool dim_u = false;
    bool fiber_at_e = false;
    SectionCheck check;
    NilpotentReport nilpotent;
    InvarianceReport invariance;
    FiberReport fiber;
    ChevalleyReport chevalley;  // with the generators of L
    bool ok() const;
};

KWReport kw_section(const Session& s, const CartanSubspace& c, const LittleWeylReport& lw);

}  // namespace tg
