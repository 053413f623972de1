#include "gmtplan/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <unordered_map>

#include "gmtplan/errors.hpp"
#include "gmtplan/parallel.hpp"

namespace gmt {

double unit_ball_volume(int d) {
  if (d < 1) throw InvalidInputError("dimension must be >= 1");
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double connection_radius(const RadiusParams& p) {
  if (p.dimension < 1) throw InvalidInputError("dimension must be >= 1");
  if (p.n < 2) throw InvalidInputError("connection radius needs n >= 2");
  if (!(p.eta >= 0.0)) throw InvalidInputError("eta must be >= 0");
  if (!(p.mu_free > 0.0 && p.mu_free <= 1.0)) {
    throw InvalidInputError("mu_free must be in (0, 1]");
  }
  double d = static_cast<double>(p.dimension);
  double n = static_cast<double>(p.n);
  double inv_d = 1.0 / d;
  return 4.0 * std::pow(1.0 + p.eta, inv_d) * std::pow(inv_d, inv_d) *
         std::pow(p.mu_free / unit_ball_volume(p.dimension), inv_d) *
         std::pow(std::log(n) / n, inv_d);
}

const std::vector<State>* NeighborGraph::edge_path(int u, int v) const {
  const auto& lst = out[u];
  auto it = std::lower_bound(lst.begin(), lst.end(), v,
                             [](const Edge& e, int t) { return e.other < t; });
  if (it == lst.end() || it->other != v || it->path_id < 0) return nullptr;
  return &paths[it->path_id];
}

std::size_t NeighborGraph::edge_count() const {
  std::size_t c = 0;
  for (const auto& lst : out) c += lst.size();
  return c;
}

namespace {

// Buckets on at most the first three axes: beyond that, 3^d neighbor-cell
// enumeration costs more than it prunes.  Candidates are a superset of the true
// neighbors on those axes, and every candidate passes through the same
// within-radius predicate brute force would apply.
constexpr int kMaxGridAxes = 3;

struct GridIndex {
  int axes = 0;
  double cell = 1.0;
  std::unordered_map<std::uint64_t, std::vector<int>> buckets;

  static std::uint64_t key(const int c[kMaxGridAxes]) {
    std::uint64_t k = 0;
    for (int a = 0; a < kMaxGridAxes; ++a) {
      k = (k << 21) | static_cast<std::uint64_t>(c[a] & 0x1fffff);
    }
    return k;
  }

  void cell_of(const State& s, int c[kMaxGridAxes]) const {
    for (int a = 0; a < kMaxGridAxes; ++a) {
      c[a] = a < axes ? static_cast<int>(std::floor(s.coords[a] / cell)) : 0;
    }
  }

  void build(const std::vector<State>& states, double radius, int dim) {
    axes = std::min(dim, kMaxGridAxes);
    cell = std::max(radius, 1e-9);
    int c[kMaxGridAxes];
    for (int i = 0; i < static_cast<int>(states.size()); ++i) {
      cell_of(states[i], c);
      buckets[key(c)].push_back(i);
    }
  }

  // Indices in the 3^axes cells around s, in unspecified order.
  void candidates(const State& s, std::vector<int>& outv) const {
    outv.clear();
    int c[kMaxGridAxes];
    cell_of(s, c);
    int lo[kMaxGridAxes], hi[kMaxGridAxes];
    for (int a = 0; a < kMaxGridAxes; ++a) {
      lo[a] = a < axes ? c[a] - 1 : 0;
      hi[a] = a < axes ? c[a] + 1 : 0;
    }
    int cur[kMaxGridAxes];
    for (cur[0] = lo[0]; cur[0] <= hi[0]; ++cur[0]) {
      for (cur[1] = lo[1]; cur[1] <= hi[1]; ++cur[1]) {
        for (cur[2] = lo[2]; cur[2] <= hi[2]; ++cur[2]) {
          auto it = buckets.find(key(cur));
          if (it == buckets.end()) continue;
          outv.insert(outv.end(), it->second.begin(), it->second.end());
        }
      }
    }
  }
};

double position_lower_bound(const State& a, const State& b, const SteeringModel& m) {
  if (m.kind == SteeringModel::Kind::dubins_airplane && m.planar_cost_only) {
    return std::hypot(a.coords[0] - b.coords[0], a.coords[1] - b.coords[1]);
  }
  return euclidean_distance(a.coords, b.coords);
}

}  // namespace

NeighborGraph build_neighbor_graph(const std::vector<State>& states, const SteeringModel& m,
                                   double radius, int workers) {
  if (!(radius > 0.0)) throw InvalidInputError("connection radius must be positive");
  if (states.empty()) throw InvalidInputError("cannot build a graph over zero samples");
  const int n = static_cast<int>(states.size());
  const int dim = states[0].dim();
  for (const State& s : states) {
    if (s.dim() != dim) throw InvalidInputError("samples differ in dimension");
    if (m.kind == SteeringModel::Kind::dubins_airplane && !s.heading) {
      throw InvalidInputError("dubins samples need headings");
    }
  }

  NeighborGraph g;
  g.n = n;
  g.radius = radius;
  g.model = m;
  g.out.resize(n);
  g.in.resize(n);

  GridIndex grid;
  grid.build(states, radius, dim);

  const bool dubins = m.kind == SteeringModel::Kind::dubins_airplane;
  std::vector<std::vector<std::vector<State>>> local_paths(dubins ? n : 0);

  parallel_chunks(workers, static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
    std::vector<int> cand;
    for (std::size_t ui = begin; ui < end; ++ui) {
      int u = static_cast<int>(ui);
      grid.candidates(states[u], cand);
      auto& lst = g.out[u];
      for (int v : cand) {
        if (v == u) continue;
        if (position_lower_bound(states[u], states[v], m) > radius) continue;
        if (dubins) {
          Connection c = connect(states[u], states[v], m);
          if (c.cost > radius) continue;
          lst.push_back({v, c.cost, static_cast<int>(local_paths[u].size())});
          local_paths[u].push_back(std::move(c.path));
        } else {
          double c = euclidean_distance(states[u].coords, states[v].coords);
          if (c > radius) continue;
          lst.push_back({v, c, -1});
        }
      }
      std::sort(lst.begin(), lst.end(),
                [](const NeighborGraph::Edge& a, const NeighborGraph::Edge& b) {
                  return a.other < b.other;
                });
    }
  });

  // Sequential merge: path ids and in-lists come out in (source, target) order no
  // matter how the parallel phase was chunked.
  if (dubins) {
    std::size_t total = 0;
    for (int u = 0; u < n; ++u) total += local_paths[u].size();
    g.paths.reserve(total);
    for (int u = 0; u < n; ++u) {
      for (auto& e : g.out[u]) {
        int local = e.path_id;
        e.path_id = static_cast<int>(g.paths.size());
        g.paths.push_back(std::move(local_paths[u][local]));
      }
    }
  }
  for (int u = 0; u < n; ++u) {
    for (const auto& e : g.out[u]) g.in[e.other].push_back({u, e.cost, e.path_id});
  }
  return g;
}

namespace {

// Little-endian scalar I/O; the cache format is defined in bytes, not in
// whatever the host happens to lay out.
void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(buf, bits);
}

struct Reader {
  const unsigned char* p;
  std::size_t left;

  bool u32(std::uint32_t& v) {
    if (left < 4) return false;
    v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    p += 4;
    left -= 4;
    return true;
  }
  bool u64(std::uint64_t& v) {
    if (left < 8) return false;
    v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    p += 8;
    left -= 8;
    return true;
  }
  bool f64(double& v) {
    std::uint64_t bits;
    if (!u64(bits)) return false;
    std::memcpy(&v, &bits, 8);
    return true;
  }
  bool u8(std::uint8_t& v) {
    if (left < 1) return false;
    v = *p++;
    --left;
    return true;
  }
};

constexpr char kMagic[4] = {'G', 'M', 'T', 'G'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

bool save_graph_cache(const NeighborGraph& g, const std::string& file, std::uint64_t problem_key) {
  std::string buf;
  buf.append(kMagic, 4);
  put_u32(buf, kVersion);
  put_u64(buf, problem_key);
  put_u32(buf, static_cast<std::uint32_t>(g.n));
  put_f64(buf, g.radius);
  buf.push_back(g.model.kind == SteeringModel::Kind::dubins_airplane ? 1 : 0);
  put_f64(buf, g.model.rho);
  put_f64(buf, g.model.discretization_step);
  buf.push_back(g.model.planar_cost_only ? 1 : 0);
  for (int u = 0; u < g.n; ++u) {
    put_u32(buf, static_cast<std::uint32_t>(g.out[u].size()));
    for (const auto& e : g.out[u]) {
      put_u32(buf, static_cast<std::uint32_t>(e.other));
      put_f64(buf, e.cost);
    }
  }

  std::string tmp = file + ".tmp";
  std::FILE* f = std::fopen(tmp.c_str(), "wb");
  if (!f) return false;
  bool ok = std::fwrite(buf.data(), 1, buf.size(), f) == buf.size();
  ok = (std::fclose(f) == 0) && ok;
  if (!ok) {
    std::remove(tmp.c_str());
    return false;
  }
  if (std::rename(tmp.c_str(), file.c_str()) != 0) {
    std::remove(tmp.c_str());
    return false;
  }
  return true;
}

std::optional<NeighborGraph> load_graph_cache(const std::string& file, std::uint64_t problem_key,
                                              const std::vector<State>& states,
                                              const SteeringModel& m, double radius) {
  std::FILE* f = std::fopen(file.c_str(), "rb");
  if (!f) return std::nullopt;
  std::string data;
  char chunk[1 << 16];
  std::size_t got;
  while ((got = std::fread(chunk, 1, sizeof(chunk), f)) > 0) data.append(chunk, got);
  std::fclose(f);

  Reader r{reinterpret_cast<const unsigned char*>(data.data()), data.size()};
  if (r.left < 4 || std::memcmp(r.p, kMagic, 4) != 0) return std::nullopt;
  r.p += 4;
  r.left -= 4;

  std::uint32_t version, n;
  std::uint64_t key;
  double rad, rho, step;
  std::uint8_t kind, planar_only;
  if (!r.u32(version) || version != kVersion) return std::nullopt;
  if (!r.u64(key) || key != problem_key) return std::nullopt;
  if (!r.u32(n) || n != states.size()) return std::nullopt;
  if (!r.f64(rad) || rad != radius) return std::nullopt;
  if (!r.u8(kind)) return std::nullopt;
  bool want_dubins = m.kind == SteeringModel::Kind::dubins_airplane;
  if ((kind == 1) != want_dubins) return std::nullopt;
  if (!r.f64(rho) || !r.f64(step) || !r.u8(planar_only)) return std::nullopt;
  if (want_dubins && (rho != m.rho || step != m.discretization_step ||
                      (planar_only != 0) != m.planar_cost_only)) {
    return std::nullopt;
  }

  NeighborGraph g;
  g.n = static_cast<int>(n);
  g.radius = radius;
  g.model = m;
  g.out.resize(n);
  g.in.resize(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    std::uint32_t cnt;
    if (!r.u32(cnt)) return std::nullopt;
    g.out[u].reserve(cnt);
    int prev = -1;
    for (std::uint32_t k = 0; k < cnt; ++k) {
      std::uint32_t target;
      double cost;
      if (!r.u32(target) || !r.f64(cost)) return std::nullopt;
      if (target >= n || static_cast<int>(target) <= prev || target == u) return std::nullopt;
      prev = static_cast<int>(target);
      NeighborGraph::Edge e{static_cast<int>(target), cost, -1};
      if (want_dubins) {
        e.path_id = static_cast<int>(g.paths.size());
        g.paths.push_back(connect(states[u], states[target], m).path);
      }
      g.out[u].push_back(e);
    }
  }
  if (r.left != 0) return std::nullopt;
  for (std::uint32_t u = 0; u < n; ++u) {
    for (const auto& e : g.out[u]) g.in[e.other].push_back({static_cast<int>(u), e.cost, e.path_id});
  }
  return g;
}

}  // namespace gmt
