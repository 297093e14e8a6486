#pragma once

// SVG 1.1 plots: grid masks over the forcing, and graph profiles.

#include <string>

#include "setevo/geometry.hpp"
#include "setevo/profile_solver.hpp"

namespace setevo {

/// Forcing set F(t) dark, Z light, drawn as run-length rectangles per row.
std::string grid_svg(const BinaryField& z, const BinaryField& forcing_open, const std::string& title);

/// Two panels: the [0, 1]^2 portion (as printed) and the full symmetric view
/// over [0, 1] x [-1, 1]. Z = {|y| <= u} light, F = {|y| > v} dark.
std::string profile_svg(const Profile& p, const std::string& title);

}  // namespace setevo
