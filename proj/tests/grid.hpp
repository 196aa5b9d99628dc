#pragma once

#include <string>

#include <thetagrade/scenario.hpp>

inline tg::Scenario grid_scenario(const std::string& name) {
    for (auto& s : tg::default_suite())
        if (s.name == name) return s;
    throw std::invalid_argument("no grid scenario " + name);
}
