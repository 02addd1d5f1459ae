#pragma once

#include "nsk/model.hpp"
#include "nsk/profile.hpp"

#include <memory>

namespace fixtures {

inline constexpr double kR1UPlus = -0.09534625892455925;
inline constexpr double kR2UPlus = -0.7071067811865476;

inline nsk::ModelParams r1() { return nsk::solve_rankine_hugoniot({1.0, 1.0}, 1.1, kR1UPlus, 1.0, 0.1); }
inline nsk::ModelParams r2() { return nsk::solve_rankine_hugoniot({1.0, 1.0}, 2.0, kR2UPlus, 10.0, 0.1); }

// Profiles are expensive enough to share between test cases.
inline std::shared_ptr<const nsk::ShockProfile> r1_profile() {
    static const auto p = std::make_shared<const nsk::ShockProfile>(nsk::solve_profile(r1()));
    return p;
}

inline std::shared_ptr<const nsk::ShockProfile> r2_profile() {
    static const auto p = std::make_shared<const nsk::ShockProfile>(nsk::solve_profile(r2()));
    return p;
}

}  // namespace fixtures
