#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thetagrade/classical.hpp"
#include "thetagrade/exactlin.hpp"
#include "thetagrade/theta.hpp"

namespace tg {

struct Scenario {
    std::string name;
    Family family = Family::SL;
    int n = 2;  // matrix size
    int m = 1;
    std::string case_label;  // empty: not declared
    std::vector<std::pair<int, bool>> cycles;  // (length, negative)
    bool outer = false;
    std::uint64_t seed = 1;
    std::optional<std::uint32_t> prime;
    // exponents of xi (order 2m) scaling the lift, one per Weyl coordinate
    std::vector<int> torus;
    std::string expect;  // optional expected W_c label, e.g. "G(3,1,2)"
};

// parse one scenario object; throws InvalidSpec on malformed input
Scenario parse_scenario(const std::string& json_text);
std::vector<Scenario> parse_suite(const std::string& json_text);
std::string scenario_to_json(const Scenario& s);

GroupType group_of(const Scenario& s);

struct Session {
    Scenario scenario;
    PrimeField F;
    GroupType type;
    AlgebraBasis alg;
    TorusData torus;
    WeylElement w;
    AutomorphismSpec spec;
    Mat op;
    Grading grading;
    Scalar zeta = 1;
    Scalar xi = 1;
    std::string case_label;
};

Session make_session(const Scenario& s);

// the acceptance grid plus the zero-rank scenario
std::vector<Scenario> default_suite();

}  // namespace tg
