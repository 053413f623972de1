#include "gmtplan/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "gmtplan/errors.hpp"
#include "gmtplan/rng.hpp"

namespace gmt {

static bool is_prime(std::uint32_t v) {
  if (v < 2) return false;
  for (std::uint32_t p = 2; p * p <= v; ++p) {
    if (v % p == 0) return false;
  }
  return true;
}

double halton(std::uint64_t index, std::uint32_t base) {
  if (index == 0) throw InvalidInputError("halton index is 1-based; got 0");
  if (!is_prime(base)) {
    throw InvalidInputError("halton base must be a prime >= 2; got " + std::to_string(base));
  }
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

std::uint32_t nth_prime(int k) {
  if (k < 1) throw InvalidInputError("nth_prime is 1-based");
  std::uint32_t candidate = 1;
  for (int found = 0; found < k;) {
    ++candidate;
    if (is_prime(candidate)) ++found;
  }
  return candidate;
}

std::vector<double> halton_point(std::uint64_t index, int d) {
  if (d < 1) throw InvalidInputError("halton_point dimension must be >= 1");
  std::vector<double> p(d);
  for (int k = 0; k < d; ++k) p[k] = halton(index, nth_prime(k + 1));
  return p;
}

namespace {

struct CandidateStream {
  const SampleSource& source;
  int d;
  std::uint64_t next_index;
  Pcg32 rng;

  CandidateStream(const SampleSource& src, int dim)
      : source(src), d(dim), next_index(src.start_index), rng(src.seed) {}

  State draw() {
    State s;
    if (source.kind == SampleSource::Kind::halton) {
      s.coords = halton_point(next_index, d);
      if (source.with_heading) s.heading = halton(next_index, nth_prime(d + 1)) * 2.0 * M_PI;
      ++next_index;
    } else {
      s.coords.resize(d);
      for (int k = 0; k < d; ++k) s.coords[k] = rng.next_double();
      if (source.with_heading) s.heading = rng.next_double() * 2.0 * M_PI;
    }
    return s;
  }
};

}  // namespace

SampleSet sample_free(int n, const ObstacleSet& obs, const GoalRegion& goal,
                      const SampleSource& source) {
  if (n < 1) throw InvalidInputError("sample count must be >= 1");
  validate_obstacles(obs);
  validate_box(goal.box, obs.dim);
  if (source.kind == SampleSource::Kind::halton && source.start_index == 0) {
    throw InvalidInputError("halton start_index is 1-based; got 0");
  }

  const std::uint64_t budget = 1000ULL * static_cast<std::uint64_t>(n);
  SampleSet out;
  out.states.reserve(n);
  std::set<std::vector<double>> seen;
  CandidateStream stream(source, obs.dim);

  std::uint64_t attempts = 0;
  while (static_cast<int>(out.states.size()) < n) {
    if (attempts == budget) {
      throw InfeasibleSamplingError("rejection budget of " + std::to_string(budget) +
                                    " candidates exhausted after collecting " +
                                    std::to_string(out.states.size()) + " samples");
    }
    ++attempts;
    State s = stream.draw();
    if (!point_free(s.coords, obs)) continue;
    if (!seen.insert(s.coords).second) continue;
    out.states.push_back(std::move(s));
  }

  for (int i = 0; i < n; ++i) {
    if (goal.contains(out.states[i])) out.goal_indices.push_back(i);
  }
  if (!out.goal_indices.empty()) return out;

  // Goal substitution: the replacement is a function of the problem alone, never
  // of how the rejection sampling happened to go.
  seen.erase(out.states[n - 1].coords);
  State sub;
  sub.coords = goal.box.center();
  if (source.with_heading) sub.heading = 0.0;
  if (!point_free(sub.coords, obs) || seen.count(sub.coords)) {
    bool found = false;
    const std::vector<double>& lo = goal.box.lo;
    const std::vector<double>& hi = goal.box.hi;
    for (std::uint64_t i = 1; i <= budget; ++i) {
      std::vector<double> q = halton_point(i, obs.dim);
      for (int k = 0; k < obs.dim; ++k) q[k] = lo[k] + q[k] * (hi[k] - lo[k]);
      if (!point_free(q, obs) || seen.count(q)) continue;
      sub.coords = std::move(q);
      if (source.with_heading) sub.heading = halton(i, nth_prime(obs.dim + 1)) * 2.0 * M_PI;
      found = true;
      break;
    }
    if (!found) {
      throw GoalBlockedError("no free sample could be placed in the goal region within " +
                             std::to_string(budget) + " candidates");
    }
  }
  out.states[n - 1] = std::move(sub);
  out.goal_indices.push_back(n - 1);
  return out;
}

int append_init(SampleSet& samples, const State& init, const GoalRegion& goal) {
  for (std::size_t i = 0; i < samples.states.size(); ++i) {
    if (samples.states[i].coords == init.coords && samples.states[i].heading == init.heading) {
      return static_cast<int>(i);
    }
  }
  samples.states.push_back(init);
  int idx = static_cast<int>(samples.states.size()) - 1;
  if (goal.contains(init)) samples.goal_indices.push_back(idx);
  return idx;
}

}  // namespace gmt
