#include "gmtplan/steering.hpp"

#include <algorithm>
#include <cmath>

#include "gmtplan/dubins.hpp"
#include "gmtplan/errors.hpp"

namespace gmt {

namespace {

constexpr double kDegenerate = 1e-12;

struct DubinsPair {
  std::array<double, 3> qa;
  std::array<double, 3> qb;
  double dz = 0.0;
};

DubinsPair validate_dubins_pair(const State& a, const State& b, const SteeringModel& m) {
  if (a.dim() != b.dim()) throw InvalidInputError("steering endpoints differ in dimension");
  if (a.dim() != 2 && a.dim() != 3) {
    throw InvalidInputError("dubins steering needs 2 or 3 position coordinates");
  }
  if (!a.heading || !b.heading) throw InvalidInputError("dubins steering needs headings");
  if (!(m.rho > 0.0)) throw InvalidInputError("dubins turning radius must be positive");
  DubinsPair p;
  p.qa = {a.coords[0], a.coords[1], *a.heading};
  p.qb = {b.coords[0], b.coords[1], *b.heading};
  if (a.dim() == 3) p.dz = b.coords[2] - a.coords[2];
  return p;
}

double circular_diff(double ta, double tb) {
  double d = mod2pi(ta - tb);
  return std::min(d, 2.0 * M_PI - d);
}

bool degenerate_pair(const DubinsPair& p) {
  return std::fabs(p.qa[0] - p.qb[0]) < kDegenerate && std::fabs(p.qa[1] - p.qb[1]) < kDegenerate &&
         std::fabs(p.dz) < kDegenerate && circular_diff(p.qa[2], p.qb[2]) < kDegenerate;
}

double combined_cost(double planar_len, double dz, const SteeringModel& m) {
  if (m.planar_cost_only) return planar_len;
  return std::sqrt(planar_len * planar_len + dz * dz);
}

}  // namespace

Connection connect(const State& a, const State& b, const SteeringModel& m) {
  Connection c;
  if (m.kind == SteeringModel::Kind::euclidean) {
    if (a.dim() != b.dim()) throw InvalidInputError("steering endpoints differ in dimension");
    c.cost = euclidean_distance(a.coords, b.coords);
    c.exact = true;
    c.path = {a, b};
    return c;
  }

  DubinsPair pair = validate_dubins_pair(a, b, m);
  c.exact = false;
  if (degenerate_pair(pair)) {
    c.cost = 0.0;
    c.path = {a};
    return c;
  }

  DubinsPlanarPath planar = dubins_shortest_path(pair.qa, pair.qb, m.rho);
  double lp = planar.length();
  c.cost = combined_cost(lp, pair.dz, m);

  int segments = std::max(1, static_cast<int>(std::ceil(lp / m.step())));
  c.path.reserve(segments + 1);
  c.path.push_back(a);
  for (int i = 1; i < segments; ++i) {
    double s = lp * static_cast<double>(i) / static_cast<double>(segments);
    std::array<double, 3> pose = planar.sample(s);
    State mid;
    mid.coords = {pose[0], pose[1]};
    if (a.dim() == 3) {
      mid.coords.push_back(a.coords[2] + pair.dz * (lp > 0.0 ? s / lp : 0.0));
    }
    mid.heading = pose[2];
    c.path.push_back(std::move(mid));
  }
  c.path.push_back(b);
  return c;
}

double connect_cost(const State& a, const State& b, const SteeringModel& m) {
  if (m.kind == SteeringModel::Kind::euclidean) {
    if (a.dim() != b.dim()) throw InvalidInputError("steering endpoints differ in dimension");
    return euclidean_distance(a.coords, b.coords);
  }
  DubinsPair pair = validate_dubins_pair(a, b, m);
  if (degenerate_pair(pair)) return 0.0;
  DubinsPlanarPath planar = dubins_shortest_path(pair.qa, pair.qb, m.rho);
  return combined_cost(planar.length(), pair.dz, m);
}

bool within_radius(const State& a, const State& b, const SteeringModel& m, double r) {
  if (m.kind == SteeringModel::Kind::euclidean) {
    if (a.dim() != b.dim()) throw InvalidInputError("steering endpoints differ in dimension");
    return euclidean_distance(a.coords, b.coords) <= r;
  }
  // Any feasible Dubins motion is at least as long as the straight-line distance
  // (planar only when the cost ignores the climb), so this prune never drops a
  // true neighbor.
  double lower_bound;
  if (m.planar_cost_only) {
    lower_bound = std::hypot(a.coords[0] - b.coords[0], a.coords[1] - b.coords[1]);
  } else {
    lower_bound = euclidean_distance(a.coords, b.coords);
  }
  if (lower_bound > r) return false;
  return connect_cost(a, b, m) <= r;
}

}  // namespace gmt
