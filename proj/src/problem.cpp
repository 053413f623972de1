#include "gmtplan/problem.hpp"

#include <bit>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gmtplan/errors.hpp"
#include "gmtplan/rng.hpp"

namespace gmt {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kSchema = "gmt-problem/1";

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InvalidInputError(path + ": " + what);
}

void reject_unknown(const Json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

const Json& member(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "required field is missing");
  return *it;
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

double as_double(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

long long as_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<long long>();
}

std::uint64_t as_u64(const Json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0)
    return static_cast<std::uint64_t>(v.get<long long>());
  fail(path, "expected a non-negative integer");
}

std::string as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_vector(const Json& v, const std::string& path, int dim) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  if (static_cast<int>(v.size()) != dim)
    fail(path, "expected " + std::to_string(dim) + " coordinates, got " +
                   std::to_string(v.size()));
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    out[k] = as_double(v[k], path + "[" + std::to_string(k) + "]");
  return out;
}

Aabb parse_box(const Json& v, const std::string& path, int dim) {
  if (!v.is_object()) fail(path, "expected an object with lo and hi");
  reject_unknown(v, path, {"lo", "hi"});
  Aabb box;
  box.lo = as_vector(member(v, path, "lo"), path + ".lo", dim);
  box.hi = as_vector(member(v, path, "hi"), path + ".hi", dim);
  for (int k = 0; k < dim; ++k) {
    if (box.lo[k] > box.hi[k]) fail(path, "lo exceeds hi on axis " + std::to_string(k));
  }
  return box;
}

std::uint64_t fold(std::uint64_t h, std::uint64_t x) { return mix64(h, x); }
std::uint64_t fold(std::uint64_t h, double x) {
  return mix64(h, std::bit_cast<std::uint64_t>(x));
}

}  // namespace

ProblemFile parse_problem(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw InvalidInputError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInputError("top level: expected a JSON object");
  reject_unknown(doc, "",
                 {"schema", "dimension", "steering", "obstacles", "init", "goal", "n", "lambda",
                  "eta", "radius_override", "sampling", "notes"});

  if (as_string(member(doc, "", "schema"), "schema") != kSchema)
    fail("schema", std::string("expected \"") + kSchema + "\"");

  ProblemFile p;
  long long dim = as_int(member(doc, "", "dimension"), "dimension");
  if (dim < 1) fail("dimension", "must be at least 1");
  p.dimension = static_cast<int>(dim);

  const Json& steering = member(doc, "", "steering");
  if (!steering.is_object()) fail("steering", "expected an object");
  reject_unknown(steering, "steering", {"model", "rho", "discretization_step", "planar_cost_only"});
  std::string model = as_string(member(steering, "steering", "model"), "steering.model");
  if (model == "euclidean") {
    p.steering.kind = SteeringModel::Kind::euclidean;
    for (const char* key : {"rho", "discretization_step", "planar_cost_only"}) {
      if (steering.contains(key))
        fail(join("steering", key), "only the dubins_airplane model uses this field");
    }
  } else if (model == "dubins_airplane") {
    p.steering.kind = SteeringModel::Kind::dubins_airplane;
    if (p.dimension != 2 && p.dimension != 3)
      fail("dimension", "dubins_airplane needs dimension 2 or 3");
    if (steering.contains("rho")) {
      p.steering.rho = as_double(steering["rho"], "steering.rho");
      if (!(p.steering.rho > 0.0)) fail("steering.rho", "must be positive");
    }
    if (steering.contains("discretization_step")) {
      p.steering.discretization_step =
          as_double(steering["discretization_step"], "steering.discretization_step");
      if (p.steering.discretization_step < 0.0)
        fail("steering.discretization_step", "must be non-negative");
    }
    if (steering.contains("planar_cost_only")) {
      if (!steering["planar_cost_only"].is_boolean())
        fail("steering.planar_cost_only", "expected a boolean");
      p.steering.planar_cost_only = steering["planar_cost_only"].get<bool>();
    }
  } else {
    fail("steering.model", "expected \"euclidean\" or \"dubins_airplane\"");
  }

  const Json& obstacles = member(doc, "", "obstacles");
  if (!obstacles.is_array()) fail("obstacles", "expected an array of boxes");
  p.obstacles.dim = p.dimension;
  for (std::size_t k = 0; k < obstacles.size(); ++k) {
    p.obstacles.boxes.push_back(
        parse_box(obstacles[k], "obstacles[" + std::to_string(k) + "]", p.dimension));
  }

  const Json& init = member(doc, "", "init");
  if (!init.is_object()) fail("init", "expected an object with coords");
  reject_unknown(init, "init", {"coords", "heading"});
  p.init.coords = as_vector(member(init, "init", "coords"), "init.coords", p.dimension);
  bool dubins = p.steering.kind == SteeringModel::Kind::dubins_airplane;
  if (init.contains("heading")) {
    if (!dubins) fail("init.heading", "only the dubins_airplane model uses a heading");
    p.init.heading = as_double(init["heading"], "init.heading");
  } else if (dubins) {
    fail("init.heading", "required field is missing");
  }
  if (!point_free(p.init.coords, p.obstacles))
    fail("init", "start state is not in free space");

  p.goal.box = parse_box(member(doc, "", "goal"), "goal", p.dimension);

  long long n = as_int(member(doc, "", "n"), "n");
  if (n < 1) fail("n", "must be at least 1");
  p.n = static_cast<int>(n);

  if (doc.contains("lambda")) {
    p.lambda = as_double(doc["lambda"], "lambda");
    if (!(p.lambda > 0.0) || p.lambda > 1.0) fail("lambda", "must be in (0, 1]");
  }
  if (doc.contains("eta")) {
    p.eta = as_double(doc["eta"], "eta");
    if (p.eta < 0.0) fail("eta", "must be non-negative");
  }
  if (doc.contains("radius_override")) {
    double r = as_double(doc["radius_override"], "radius_override");
    if (!(r > 0.0)) fail("radius_override", "must be positive");
    p.radius_override = r;
  }

  p.sampling.with_heading = dubins;
  if (doc.contains("sampling")) {
    const Json& sampling = doc["sampling"];
    if (!sampling.is_object()) fail("sampling", "expected an object");
    reject_unknown(sampling, "sampling", {"kind", "start_index", "seed"});
    std::string kind = as_string(member(sampling, "sampling", "kind"), "sampling.kind");
    if (kind == "halton") {
      p.sampling.kind = SampleSource::Kind::halton;
      if (sampling.contains("seed"))
        fail("sampling.seed", "only uniform sampling takes a seed");
      if (sampling.contains("start_index")) {
        p.sampling.start_index = as_u64(sampling["start_index"], "sampling.start_index");
        if (p.sampling.start_index == 0) fail("sampling.start_index", "must be at least 1");
      }
    } else if (kind == "uniform") {
      p.sampling.kind = SampleSource::Kind::uniform;
      if (sampling.contains("start_index"))
        fail("sampling.start_index", "only halton sampling takes a start index");
      if (sampling.contains("seed")) p.sampling.seed = as_u64(sampling["seed"], "sampling.seed");
    } else {
      fail("sampling.kind", "expected \"halton\" or \"uniform\"");
    }
  }

  if (doc.contains("notes")) p.notes = as_string(doc["notes"], "notes");
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string problem_json(const ProblemFile& p) {
  Json doc;
  doc["schema"] = kSchema;
  doc["dimension"] = p.dimension;
  Json steering;
  if (p.steering.kind == SteeringModel::Kind::euclidean) {
    steering["model"] = "euclidean";
  } else {
    steering["model"] = "dubins_airplane";
    steering["rho"] = p.steering.rho;
    steering["discretization_step"] = p.steering.discretization_step;
    steering["planar_cost_only"] = p.steering.planar_cost_only;
  }
  doc["steering"] = std::move(steering);
  Json obstacles = Json::array();
  for (const Aabb& box : p.obstacles.boxes) {
    obstacles.push_back(Json{{"lo", box.lo}, {"hi", box.hi}});
  }
  doc["obstacles"] = std::move(obstacles);
  Json init;
  init["coords"] = p.init.coords;
  if (p.init.heading) init["heading"] = *p.init.heading;
  doc["init"] = std::move(init);
  doc["goal"] = Json{{"lo", p.goal.box.lo}, {"hi", p.goal.box.hi}};
  doc["n"] = p.n;
  doc["lambda"] = p.lambda;
  doc["eta"] = p.eta;
  if (p.radius_override) doc["radius_override"] = *p.radius_override;
  Json sampling;
  if (p.sampling.kind == SampleSource::Kind::halton) {
    sampling["kind"] = "halton";
    sampling["start_index"] = p.sampling.start_index;
  } else {
    sampling["kind"] = "uniform";
    sampling["seed"] = p.sampling.seed;
  }
  doc["sampling"] = std::move(sampling);
  if (!p.notes.empty()) doc["notes"] = p.notes;
  return doc.dump(2) + "\n";
}

void save_problem(const ProblemFile& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << problem_json(p);
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::uint64_t problem_key(const ProblemFile& p) {
  std::uint64_t h = mix64(0x676d742d70726f62ULL);  // stable salt
  h = fold(h, static_cast<std::uint64_t>(p.dimension));
  h = fold(h, static_cast<std::uint64_t>(p.steering.kind));
  h = fold(h, p.steering.rho);
  h = fold(h, p.steering.step());
  h = fold(h, static_cast<std::uint64_t>(p.steering.planar_cost_only));
  h = fold(h, static_cast<std::uint64_t>(p.obstacles.boxes.size()));
  for (const Aabb& box : p.obstacles.boxes) {
    for (double v : box.lo) h = fold(h, v);
    for (double v : box.hi) h = fold(h, v);
  }
  for (double v : p.init.coords) h = fold(h, v);
  h = fold(h, p.init.heading ? *p.init.heading : -1.0);
  for (double v : p.goal.box.lo) h = fold(h, v);
  for (double v : p.goal.box.hi) h = fold(h, v);
  h = fold(h, static_cast<std::uint64_t>(p.n));
  h = fold(h, static_cast<std::uint64_t>(p.sampling.kind));
  h = fold(h, p.sampling.start_index);
  h = fold(h, p.sampling.seed);
  h = fold(h, static_cast<std::uint64_t>(p.sampling.with_heading));
  return h;
}

ObstacleSet refine_obstacles(const ObstacleSet& obs, int factor) {
  if (factor < 1) throw InvalidInputError("refinement factor must be at least 1");
  if (factor == 1) return obs;
  ObstacleSet out;
  out.dim = obs.dim;
  out.boxes.reserve(obs.boxes.size() * factor);
  for (const Aabb& box : obs.boxes) {
    int axis = 0;
    double widest = -1.0;
    for (int k = 0; k < obs.dim; ++k) {
      double w = box.hi[k] - box.lo[k];
      if (w > widest) {
        widest = w;
        axis = k;
      }
    }
    // Slab boundaries are computed once and shared, so adjacent pieces meet
    // exactly and their union is bit-for-bit the original box.
    for (int i = 0; i < factor; ++i) {
      Aabb piece = box;
      piece.lo[axis] =
          i == 0 ? box.lo[axis] : box.lo[axis] + (box.hi[axis] - box.lo[axis]) * i / factor;
      piece.hi[axis] = i == factor - 1
                           ? box.hi[axis]
                           : box.lo[axis] + (box.hi[axis] - box.lo[axis]) * (i + 1) / factor;
      out.boxes.push_back(std::move(piece));
    }
  }
  return out;
}

ProblemInstance build_instance(const ProblemFile& p, int workers, const std::string& cache_file) {
  ProblemInstance inst;
  SampleSource src = p.sampling;
  src.with_heading = p.steering.kind == SteeringModel::Kind::dubins_airplane;
  inst.samples = sample_free(p.n, p.obstacles, p.goal, src);
  inst.init_index = append_init(inst.samples, p.init, p.goal);
  if (p.radius_override) {
    inst.radius = *p.radius_override;
  } else {
    RadiusParams rp;
    rp.dimension = p.dimension;
    rp.n = p.n;
    rp.eta = p.eta;
    rp.mu_free = free_measure_upper_bound(p.obstacles);
    inst.radius = connection_radius(rp);
  }
  std::uint64_t key = problem_key(p);
  if (!cache_file.empty()) {
    if (auto cached =
            load_graph_cache(cache_file, key, inst.samples.states, p.steering, inst.radius)) {
      inst.graph = std::move(*cached);
      return inst;
    }
  }
  inst.graph = build_neighbor_graph(inst.samples.states, p.steering, inst.radius, workers);
  if (!cache_file.empty()) save_graph_cache(inst.graph, cache_file, key);
  return inst;
}

}  // namespace gmt
