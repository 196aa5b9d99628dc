#pragma once

#include <string>

namespace tg {

enum class Family { SL, GL, SO_odd, SO_even, Sp };

inline std::string family_name(Family f) {
    switch (f) {
        case Family::SL: return "SL";
        case Family::GL: return "GL";
        case Family::SO_odd: return "SO";
        case Family::SO_even: return "SO";
        case Family::Sp: return "Sp";
    }
    return "?";
}

inline bool is_orthogonal(Family f) { return f == Family::SO_odd || f == Family::SO_even; }
inline bool has_form(Family f) { return is_orthogonal(f) || f == Family::Sp; }

}  // namespace tg
