#pragma once

#include "roughweyl/spectral.hpp"
#include "roughweyl/weyl.hpp"

#include <iosfwd>

namespace roughweyl {

// Log-log staircase plot of N^+(lambda) and N^-(lambda) against the lines
// c_+/lambda and c_-/lambda. The output depends only on the inputs.
void emit_svg(std::ostream& os, const Spectrum& s, const WeylTarget& target);

} // namespace roughweyl
