#include "gmtplan/dubins.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gmtplan/errors.hpp"

namespace gmt {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
// Tolerances in normalized (rho = 1) units.  Discriminants this far below zero
// still count as feasible (roundoff at the word's feasibility boundary), and arc
// lengths this close to a full circle collapse to zero instead of adding a
// spurious 2*pi*rho of cost.
constexpr double kZero = -1e-9;
constexpr double kSnap = 1e-9;

struct Word {
  double t = 0.0, p = 0.0, q = 0.0;
  bool ok = false;

  double total() const { return ok ? t + p + q : std::numeric_limits<double>::infinity(); }
};

double snap2pi(double x) {
  double m = mod2pi(x);
  if (kTwoPi - m < kSnap) m = 0.0;
  return m;
}

}  // namespace

const std::array<std::array<int, 3>, 6>& dubins_words() {
  static const std::array<std::array<int, 3>, 6> words = {{
      {DubinsPlanarPath::kLeft, DubinsPlanarPath::kStraight, DubinsPlanarPath::kLeft},
      {DubinsPlanarPath::kRight, DubinsPlanarPath::kStraight, DubinsPlanarPath::kRight},
      {DubinsPlanarPath::kRight, DubinsPlanarPath::kStraight, DubinsPlanarPath::kLeft},
      {DubinsPlanarPath::kLeft, DubinsPlanarPath::kStraight, DubinsPlanarPath::kRight},
      {DubinsPlanarPath::kRight, DubinsPlanarPath::kLeft, DubinsPlanarPath::kRight},
      {DubinsPlanarPath::kLeft, DubinsPlanarPath::kRight, DubinsPlanarPath::kLeft},
  }};
  return words;
}

double mod2pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

std::array<double, 3> DubinsPlanarPath::sample(double s) const {
  double remaining = std::clamp(s / rho, 0.0, param[0] + param[1] + param[2]);
  std::array<double, 3> pose = {0.0, 0.0, start[2]};
  const auto& segs = dubins_words()[word];
  for (int k = 0; k < 3; ++k) {
    double v = std::min(remaining, param[k]);
    remaining -= v;
    double phi = pose[2];
    switch (segs[k]) {
      case kLeft:
        pose[0] += std::sin(phi + v) - std::sin(phi);
        pose[1] += -std::cos(phi + v) + std::cos(phi);
        pose[2] = phi + v;
        break;
      case kRight:
        pose[0] += -std::sin(phi - v) + std::sin(phi);
        pose[1] += std::cos(phi - v) - std::cos(phi);
        pose[2] = phi - v;
        break;
      case kStraight:
        pose[0] += v * std::cos(phi);
        pose[1] += v * std::sin(phi);
        break;
    }
    if (remaining <= 0.0) break;
  }
  return {start[0] + pose[0] * rho, start[1] + pose[1] * rho, mod2pi(pose[2])};
}

DubinsPlanarPath dubins_shortest_path(const std::array<double, 3>& a,
                                      const std::array<double, 3>& b, double rho) {
  if (!(rho > 0.0)) throw InvalidInputError("dubins turning radius must be positive");

  double dx = b[0] - a[0];
  double dy = b[1] - a[1];
  double d = std::sqrt(dx * dx + dy * dy) / rho;
  double theta = (d > 0.0) ? std::atan2(dy, dx) : 0.0;
  double alpha = mod2pi(a[2] - theta);
  double beta = mod2pi(b[2] - theta);

  double sa = std::sin(alpha), ca = std::cos(alpha);
  double sb = std::sin(beta), cb = std::cos(beta);
  double cab = ca * cb + sa * sb;  // cos(alpha - beta)

  Word words[6];

  {  // LSL
    double tmp = 2.0 + d * d - 2.0 * (cab - d * (sa - sb));
    if (tmp >= kZero) {
      double th = std::atan2(cb - ca, d + sa - sb);
      words[0] = {snap2pi(-alpha + th), std::sqrt(std::max(tmp, 0.0)), snap2pi(beta - th), true};
    }
  }
  {  // RSR
    double tmp = 2.0 + d * d - 2.0 * (cab - d * (sb - sa));
    if (tmp >= kZero) {
      double th = std::atan2(ca - cb, d - sa + sb);
      words[1] = {snap2pi(alpha - th), std::sqrt(std::max(tmp, 0.0)), snap2pi(-beta + th), true};
    }
  }
  {  // RSL
    double tmp = d * d - 2.0 + 2.0 * (cab - d * (sa + sb));
    if (tmp >= kZero) {
      double p = std::sqrt(std::max(tmp, 0.0));
      double th = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
      words[2] = {snap2pi(alpha - th), p, snap2pi(beta - th), true};
    }
  }
  {  // LSR
    double tmp = -2.0 + d * d + 2.0 * (cab + d * (sa + sb));
    if (tmp >= kZero) {
      double p = std::sqrt(std::max(tmp, 0.0));
      double th = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
      words[3] = {snap2pi(-alpha + th), p, snap2pi(-beta + th), true};
    }
  }
  {  // RLR
    double tmp = 0.125 * (6.0 - d * d + 2.0 * (cab + d * (sa - sb)));
    if (std::fabs(tmp) <= 1.0) {
      double p = kTwoPi - std::acos(tmp);
      double th = std::atan2(ca - cb, d - sa + sb);
      double t = snap2pi(alpha - th + 0.5 * p);
      words[4] = {t, p, snap2pi(alpha - beta - t + p), true};
    }
  }
  {  // LRL
    double tmp = 0.125 * (6.0 - d * d + 2.0 * (cab - d * (sa - sb)));
    if (std::fabs(tmp) <= 1.0) {
      double p = kTwoPi - std::acos(tmp);
      double th = std::atan2(-ca + cb, d + sa - sb);
      double t = snap2pi(-alpha + th + 0.5 * p);
      words[5] = {t, p, snap2pi(beta - alpha - t + p), true};
    }
  }

  int best = -1;
  double best_len = std::numeric_limits<double>::infinity();
  for (int w = 0; w < 6; ++w) {
    double len = words[w].total();
    if (len < best_len) {
      best_len = len;
      best = w;
    }
  }
  if (best < 0) throw InvalidInputError("no dubins word is feasible for this pose pair");

  DubinsPlanarPath path;
  path.start = a;
  path.rho = rho;
  path.word = best;
  path.param = {words[best].t, words[best].p, words[best].q};
  return path;
}

}  // namespace gmt
