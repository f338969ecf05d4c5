#include "roughweyl/quadrature.hpp"

#include "roughweyl/errors.hpp"

#include <array>
#include <string>

namespace roughweyl {

namespace {

constexpr std::array<QuadPoint, 1> kCentroid{{{1.0 / 3.0, 1.0 / 3.0, 1.0}}};

constexpr std::array<QuadPoint, 3> kThreePoint{{
    {1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0},
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0},
}};

constexpr double kA1 = 0.44594849091596488632;
constexpr double kW1 = 0.22338158967801146570;
constexpr double kA2 = 0.091576213509770743460;
constexpr double kW2 = 0.10995174365532186764;

constexpr std::array<QuadPoint, 6> kSixPoint{{
    {kA1, kA1, kW1},
    {1.0 - 2.0 * kA1, kA1, kW1},
    {kA1, 1.0 - 2.0 * kA1, kW1},
    {kA2, kA2, kW2},
    {1.0 - 2.0 * kA2, kA2, kW2},
    {kA2, 1.0 - 2.0 * kA2, kW2},
}};

} // namespace

std::span<const QuadPoint> triangle_rule(int order) {
  switch (order) {
  case 1: return kCentroid;
  case 2: return kThreePoint;
  case 4: return kSixPoint;
  default: throw ModelingError("quadrature order must be 1, 2 or 4 (got " + std::to_string(order) + ")");
  }
}

} // namespace roughweyl
