#include "gmtplan/space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmtplan/errors.hpp"

namespace gmt {

bool Aabb::contains(const std::vector<double>& p) const {
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (p[k] < lo[k] || p[k] > hi[k]) return false;
  }
  return true;
}

std::vector<double> Aabb::center() const {
  std::vector<double> c(lo.size());
  for (std::size_t k = 0; k < lo.size(); ++k) c[k] = 0.5 * (lo[k] + hi[k]);
  return c;
}

void validate_box(const Aabb& box, int dim) {
  if (box.dim() != dim || static_cast<int>(box.hi.size()) != dim) {
    throw InvalidInputError("box dimension mismatch");
  }
  for (int k = 0; k < dim; ++k) {
    if (!(box.lo[k] <= box.hi[k])) {
      throw InvalidInputError("box has lo > hi on axis " + std::to_string(k));
    }
  }
}

void validate_obstacles(const ObstacleSet& obs) {
  if (obs.dim < 1) throw InvalidInputError("obstacle set dimension must be >= 1");
  for (const Aabb& b : obs.boxes) validate_box(b, obs.dim);
}

static bool point_in_cube(const std::vector<double>& p) {
  for (double x : p) {
    if (x < 0.0 || x > 1.0) return false;
  }
  return true;
}

bool point_free(const std::vector<double>& p, const ObstacleSet& obs) {
  if (static_cast<int>(p.size()) != obs.dim) throw InvalidInputError("point dimension mismatch");
  if (!point_in_cube(p)) return false;
  for (const Aabb& b : obs.boxes) {
    if (b.contains(p)) return false;
  }
  return true;
}

bool point_free(const State& s, const ObstacleSet& obs) { return point_free(s.coords, obs); }

// Closed slab clipping: keeps [tmin,tmax] with <= comparisons so that a segment
// merely touching a face still reports a hit, matching the closed-box convention.
static bool segment_hits_box(const std::vector<double>& a, const std::vector<double>& b,
                             const Aabb& box) {
  double tmin = 0.0;
  double tmax = 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double dk = b[k] - a[k];
    if (dk == 0.0) {
      if (a[k] < box.lo[k] || a[k] > box.hi[k]) return false;
    } else {
      double t0 = (box.lo[k] - a[k]) / dk;
      double t1 = (box.hi[k] - a[k]) / dk;
      if (t0 > t1) std::swap(t0, t1);
      tmin = std::max(tmin, t0);
      tmax = std::min(tmax, t1);
      if (tmin > tmax) return false;
    }
  }
  return true;
}

bool segment_free(const State& a, const State& b, const ObstacleSet& obs) {
  if (a.dim() != obs.dim || b.dim() != obs.dim) {
    throw InvalidInputError("segment endpoint dimension mismatch");
  }
  if (a.coords == b.coords) return point_free(a.coords, obs);
  if (!point_in_cube(a.coords) || !point_in_cube(b.coords)) return false;
  for (const Aabb& box : obs.boxes) {
    if (segment_hits_box(a.coords, b.coords, box)) return false;
  }
  return true;
}

bool polyline_free(const std::vector<State>& pts, const ObstacleSet& obs) {
  if (pts.empty()) throw InvalidInputError("polyline must contain at least one state");
  if (pts.size() == 1) return point_free(pts[0], obs);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!segment_free(pts[i], pts[i + 1], obs)) return false;
  }
  return true;
}

double free_measure_upper_bound(const ObstacleSet& obs) {
  validate_obstacles(obs);
  return 1.0;
}

double point_box_distance(const std::vector<double>& p, const Aabb& box) {
  double sq = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    double d = 0.0;
    if (p[k] < box.lo[k]) {
      d = box.lo[k] - p[k];
    } else if (p[k] > box.hi[k]) {
      d = p[k] - box.hi[k];
    }
    sq += d * d;
  }
  return std::sqrt(sq);
}

double cube_boundary_clearance(const std::vector<double>& p) {
  double m = 1.0;
  for (double x : p) m = std::min(m, std::min(x, 1.0 - x));
  return m;
}

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace gmt
