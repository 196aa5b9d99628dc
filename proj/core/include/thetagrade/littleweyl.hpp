#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thetagrade/cartan.hpp"
#include "thetagrade/scenario.hpp"

namespace tg {

// (m', q, r); r = 0 is the trivial group
struct GmqrLabel {
    int m = 1;
    int q = 1;
    int r = 0;
    std::string str() const;
    long long order() const;  // m^r r! / q
    bool operator==(const GmqrLabel&) const = default;
};

struct LittleWeylGroup {
    int r = 0;
    std::vector<Mat> elements;  // r x r monomial matrices, sorted

    int order() const { return static_cast<int>(elements.size()); }
    bool contains(const Mat& g) const;
    bool subset_of(const LittleWeylGroup& other) const;
    bool closed(const PrimeField& F) const;
};

// W^theta as the centralizer of w; full_isometry enlarges W to the signed group for SO_even
std::vector<WeylElement> w_theta(const GroupType& type, const WeylElement& w, bool full_isometry = false);

// lift of a Weyl element into G, or into O(2n) when orthogonal is set
Mat weyl_representative(const PrimeField& F, const GroupType& type, const WeylElement& u, bool orthogonal);

// matrix of Ad g on the basis of c, if g stabilizes c
std::optional<Mat> action_matrix(const PrimeField& F, const CartanSubspace& c, const Mat& g);
bool is_monomial(const Mat& a);

// sorted distinct images; throws MathError when some element does not stabilize c
LittleWeylGroup action_on_cartan(const PrimeField& F, const GroupType& type,
                                 const std::vector<WeylElement>& ws, const CartanSubspace& c,
                                 bool orthogonal);

enum class Realization { Fixed, Central, None };

struct Certificate {
    WeylElement u;
    Mat action;
    Realization kind = Realization::None;
    Mat g;               // representative n_u t
    Mat defect;          // g^-1 theta(g), identity or central
    bool identity_component = false;
};

// small linear congruence systems A v = b (mod M)
struct CongruenceSolution {
    std::vector<long long> particular;
    std::vector<std::vector<long long>> homogeneous;  // generators of the solution group
};
std::optional<CongruenceSolution> solve_congruences(std::vector<std::vector<long long>> A,
                                                    std::vector<long long> b, long long M);

// exponent action of theta on the torus coordinates
std::vector<std::vector<long long>> torus_exponent_action(const PrimeField& F, const AutomorphismSpec& spec);

// for SO: whether a theta-fixed g lies in the identity component of G^theta
bool in_identity_component(const PrimeField& F, const AutomorphismSpec& spec, const Mat& g);

// theta-fixed (or central-defect when relax_center) representative n_u t
std::optional<Certificate> realize_fixed(const PrimeField& F, const AutomorphismSpec& spec,
                                         const WeylElement& u, bool relax_center);

// label relative to the entry order ambient_m; nullopt when unidentified
std::optional<GmqrLabel> identify_gmqr(const PrimeField& F, const LittleWeylGroup& g, int ambient_m);
int entry_order_lcm(const PrimeField& F, const LittleWeylGroup& g);

struct EigenFlags {
    std::vector<std::pair<Scalar, int>> multiplicities;  // eigenvalue, multiplicity
    int mult_one = 0;
    int mult_minus_one = 0;
    int s0 = 0;
    bool outer_minus = false;  // (n gamma(n))^(m/2) = -I
};
EigenFlags eigen_flags(const PrimeField& F, const AutomorphismSpec& spec, int r);

GmqrLabel predicted_label(const std::string& case_label, const GroupType& type, int m, int r,
                          const EigenFlags& flags);

struct PseudoreflectionReport {
    std::vector<Mat> pseudoreflections;
    bool generated_by_them = false;
    std::vector<int> degrees;
    long long degree_product = 0;
};
PseudoreflectionReport pseudoreflection_analysis(const PrimeField& F, const LittleWeylGroup& g,
                                                 const GmqrLabel& label);
LittleWeylGroup closure(const PrimeField& F, int r, const std::vector<Mat>& gens);

struct LittleWeylReport {
    int w_theta_order = 0;
    LittleWeylGroup w1, wz, wc, w1_full;
    std::vector<Certificate> certificates;
    std::optional<GmqrLabel> label;  // identified W_c
    std::optional<GmqrLabel> label_w1;
    std::optional<GmqrLabel> label_wz;
    GmqrLabel predicted;
    EigenFlags flags;
    int ambient_m = 1;
    bool chain_ok = false;  // W_c in W_c^Z in W_1
    bool order_formula = false;
    PseudoreflectionReport pseudo;
    bool matches_prediction() const { return label && *label == predicted; }
};

LittleWeylReport little_weyl(const Session& s, const CartanSubspace& c);

}  // namespace tg
