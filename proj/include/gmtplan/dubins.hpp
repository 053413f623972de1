#pragma once

#include <array>

namespace gmt {

// Planar Dubins shortest path between poses (x, y, heading) for a car of minimum
// turning radius rho, picked from the six candidate words LSL, RSR, RSL, LSR,
// RLR, LRL.  Ties go to the earliest word in that order so results never depend
// on evaluation quirks.
struct DubinsPlanarPath {
  enum Seg : int { kLeft, kStraight, kRight };

  std::array<double, 3> start{};  // world-units pose the params are relative to
  std::array<double, 3> param{};  // segment lengths, normalized by rho
  double rho = 1.0;
  int word = 0;  // index into dubins_words()

  double length() const { return (param[0] + param[1] + param[2]) * rho; }

  // Pose after arc length s (world units, clamped to [0, length]).
  std::array<double, 3> sample(double s) const;
};

const std::array<std::array<int, 3>, 6>& dubins_words();

DubinsPlanarPath dubins_shortest_path(const std::array<double, 3>& a,
                                      const std::array<double, 3>& b, double rho);

double mod2pi(double x);

}  // namespace gmt
