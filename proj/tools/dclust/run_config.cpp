#include "run_config.hpp"

#include <cstdlib>
#include <set>
#include <sstream>

#include <dclust/value.hpp>

namespace dclust::cli {

namespace {

const std::set<std::string> kKnownKeys = {
    "graph.kind",       "graph.d",          "graph.lengths",       "graph.boundary",
    "graph.layers",     "graph.templates",  "init.kind",           "init.mode",
    "init.value",       "init.a",           "init.b",              "init.rate",
    "init.shape",       "init.scale",       "init.v1",             "init.p",
    "init.v2",          "init.values",      "init.pattern_shape",  "init.random_shift",
    "run.seed",         "run.max_steps",    "run.threads",         "run.cadence",
    "run.stop_on_absorption", "run.audit",  "run.type_window",     "observe.deltas",
    "observe.ks",       "output.dir",       "output.snapshot_steps", "output.snapshot_every",
    "oracle.horizon",   "oracle.trials",    "oracle.tolerance",
};

std::string join(const auto& items, const char* sep) {
  std::ostringstream os;
  bool first = true;
  for (const auto& item : items) {
    if (!first) os << sep;
    os << item;
    first = false;
  }
  return os.str();
}

std::string fmt(double v) { return format_double(v); }

std::vector<EdgeTemplate> parse_templates(const std::string& key, const std::string& text) {
  std::vector<EdgeTemplate> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ';')) {
    if (item.empty()) continue;
    const auto parts = split(item, ':');
    if (parts.size() != 3) throw ConfigError(key, "template '" + item + "' must read from:to:offset[,offset...]");
    EdgeTemplate t;
    t.from_layer = parse_u64(key, parts[0]);
    t.to_layer = parse_u64(key, parts[1]);
    for (const auto& o : split(parts[2], ',')) t.offset.push_back(parse_i64(key, o));
    out.push_back(std::move(t));
  }
  return out;
}

std::string format_templates(const std::vector<EdgeTemplate>& templates) {
  std::vector<std::string> items;
  for (const auto& t : templates)
    items.push_back(std::to_string(t.from_layer) + ":" + std::to_string(t.to_layer) + ":" + join(t.offset, ","));
  return join(items, "; ");
}

// Maps a graph-construction diagnostic onto the key that caused it.
std::string graph_key_for(const std::string& msg) {
  if (msg.find("template") != std::string::npos) return "graph.templates";
  if (msg.find("layer count") != std::string::npos) return "graph.layers";
  if (msg.find("dimension") != std::string::npos) return "graph.d";
  return "graph.lengths";
}

std::string init_key_for(const std::string& msg) {
  for (const char* param : {"value", "rate", "shape", "scale", "v1", "v2", "values"}) {
    if (msg.find(std::string(".") + param + " ") != std::string::npos) return std::string("init.") + param;
  }
  if (msg.find(".p ") != std::string::npos) return "init.p";
  if (msg.find(".a ") != std::string::npos || msg.find("a <= b") != std::string::npos) return "init.a";
  if (msg.find(".b ") != std::string::npos) return "init.b";
  if (msg.find("shape") != std::string::npos || msg.find("period") != std::string::npos) return "init.pattern_shape";
  if (msg.find("exact mode") != std::string::npos) return "init.mode";
  return "init.kind";
}

Law parse_law(const ConfigFile& f) {
  const std::string kind = f.get_string("init.kind", "constant");
  if (kind == "constant") return law::Constant{f.get_double("init.value", 1.0)};
  if (kind == "uniform_real") return law::UniformReal{f.get_double("init.a", 0.0), f.get_double("init.b", 1.0)};
  if (kind == "exponential") return law::Exponential{f.get_double("init.rate", 1.0)};
  if (kind == "pareto") return law::Pareto{f.get_double("init.shape", 1.0), f.get_double("init.scale", 1.0)};
  if (kind == "two_point")
    return law::TwoPoint{f.get_double("init.v1", 1.0), f.get_double("init.p", 0.5), f.get_double("init.v2", 0.0)};
  if (kind == "uniform_int") return law::UniformInt{f.get_u64("init.a", 0), f.get_u64("init.b", 9)};
  if (kind == "geometric") return law::Geometric{f.get_double("init.p", 0.5)};
  if (kind == "pattern") {
    law::Pattern p;
    p.values = f.get_doubles("init.values", {});
    for (auto s : f.get_u64s("init.pattern_shape", {})) p.shape.push_back(s);
    p.random_shift = f.get_bool("init.random_shift", false);
    return p;
  }
  throw ConfigError("init.kind", "unknown law '" + kind + "'");
}

}  // namespace

std::vector<JointThreshold> RunConfig::joint() const {
  std::vector<JointThreshold> out;
  for (double d : deltas)
    for (auto k : ks) out.push_back({d, static_cast<std::size_t>(k)});
  return out;
}

std::string joint_column_name(const JointThreshold& j) {
  return "joint_gap_" + format_double(j.delta) + "_" + std::to_string(j.k);
}

Graph build_graph(const GraphParams& p) {
  if (p.kind == GraphKind::torus) return build_torus(p.dimension(), p.lengths, p.boundary);
  return build_layered(p.layers, p.dimension(), p.lengths, p.templates, p.boundary);
}

RunConfig resolve(const ConfigFile& f) {
  for (const auto& [key, value] : f.entries())
    if (!kKnownKeys.count(key) && key.rfind("sweep.", 0) != 0) throw ConfigError(key, "unknown key");

  RunConfig c;

  const std::string kind = f.get_string("graph.kind", "torus");
  if (kind == "torus")
    c.graph.kind = GraphKind::torus;
  else if (kind == "layered")
    c.graph.kind = GraphKind::layered;
  else
    throw ConfigError("graph.kind", "expected torus or layered, got '" + kind + "'");

  const auto lengths = f.get_u64s("graph.lengths", {});
  if (lengths.empty()) throw ConfigError("graph.lengths", "required");
  const std::uint64_t d = f.get_u64("graph.d", lengths.size());
  if (d == 0) throw ConfigError("graph.d", "dimension must be >= 1");
  if (lengths.size() == 1 && d > 1)
    c.graph.lengths.assign(d, lengths.front());
  else if (lengths.size() == d)
    c.graph.lengths.assign(lengths.begin(), lengths.end());
  else
    throw ConfigError("graph.lengths", "expected 1 or " + std::to_string(d) + " lengths");
  for (auto len : c.graph.lengths)
    if (len < 2) throw ConfigError("graph.lengths", "every length must be >= 2");

  const std::string boundary = f.get_string("graph.boundary", "periodic");
  if (boundary == "periodic")
    c.graph.boundary = Boundary::periodic;
  else if (boundary == "free")
    c.graph.boundary = Boundary::free;
  else
    throw ConfigError("graph.boundary", "expected periodic or free, got '" + boundary + "'");

  if (c.graph.kind == GraphKind::layered) {
    c.graph.layers = f.get_u64("graph.layers", 1);
    c.graph.templates = parse_templates("graph.templates", f.require_string("graph.templates"));
  } else {
    if (f.has("graph.layers") || f.has("graph.templates"))
      throw ConfigError(f.has("graph.layers") ? "graph.layers" : "graph.templates", "only valid for graph.kind = layered");
  }
  try {
    (void)build_graph(c.graph);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(graph_key_for(e.what()), e.what());
  }

  c.init.law = parse_law(f);
  const std::string mode = f.get_string("init.mode", "auto");
  if (mode == "auto")
    c.init.mode = default_mode(c.init.law);
  else if (mode == "exact")
    c.init.mode = ValueMode::exact;
  else if (mode == "real")
    c.init.mode = ValueMode::real;
  else
    throw ConfigError("init.mode", "expected exact, real or auto, got '" + mode + "'");
  try {
    validate(c.init);
    if (const auto* p = std::get_if<law::Pattern>(&c.init.law)) {
      const Graph g = build_graph(c.graph);
      if (c.init.mode == ValueMode::exact)
        (void)pattern_field<ExactValue>(g, *p, 0);
      else
        (void)pattern_field<RealValue>(g, *p, 0);
    }
  } catch (const std::invalid_argument& e) {
    std::string key = init_key_for(e.what());
    // Without an explicit shape the period is the length of the value list.
    if (key == "init.pattern_shape" && !f.has(key)) key = "init.values";
    throw ConfigError(key, e.what());
  }

  c.seed = f.get_u64("run.seed", 0);
  c.max_steps = f.get_u64("run.max_steps", 100000);
  const auto threads = f.get_u64("run.threads", 1);
  if (threads < 1 || threads > 1024) throw ConfigError("run.threads", "must lie in [1, 1024]");
  c.threads = static_cast<int>(threads);
  c.cadence = f.get_u64("run.cadence", 1);
  if (c.cadence < 1) throw ConfigError("run.cadence", "must be >= 1");
  c.stop_on_absorption = f.get_bool("run.stop_on_absorption", true);
  c.audit = f.get_bool("run.audit", true);
  c.type_window = f.get_u64("run.type_window", 16);

  c.deltas = f.get_doubles("observe.deltas", c.deltas);
  for (double d : c.deltas)
    if (!(d > 0)) throw ConfigError("observe.deltas", "every delta must be > 0");
  c.ks = f.get_u64s("observe.ks", c.ks);

  c.out_dir = f.get_string("output.dir", c.out_dir);
  c.snapshot_steps = f.get_u64s("output.snapshot_steps", {});
  c.snapshot_every = f.get_u64("output.snapshot_every", 0);

  c.oracle_horizon = f.get_u64("oracle.horizon", 1);
  c.oracle_trials = f.get_u64("oracle.trials", 100000);
  if (c.oracle_trials == 0) throw ConfigError("oracle.trials", "must be >= 1");
  c.oracle_tolerance = f.get_double("oracle.tolerance", 0.01);
  if (!(c.oracle_tolerance >= 0)) throw ConfigError("oracle.tolerance", "must be >= 0");
  return c;
}

std::map<std::string, std::string> canonical(const RunConfig& c) {
  std::map<std::string, std::string> m;
  m["graph.kind"] = c.graph.kind == GraphKind::torus ? "torus" : "layered";
  m["graph.d"] = std::to_string(c.graph.dimension());
  m["graph.lengths"] = join(c.graph.lengths, ",");
  m["graph.boundary"] = c.graph.boundary == Boundary::periodic ? "periodic" : "free";
  if (c.graph.kind == GraphKind::layered) {
    m["graph.layers"] = std::to_string(c.graph.layers);
    m["graph.templates"] = format_templates(c.graph.templates);
  }

  m["init.kind"] = law_name(c.init.law);
  m["init.mode"] = to_string(c.init.mode);
  std::visit(
      [&](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, law::Constant>) {
          m["init.value"] = fmt(l.value);
        } else if constexpr (std::is_same_v<L, law::UniformReal>) {
          m["init.a"] = fmt(l.a);
          m["init.b"] = fmt(l.b);
        } else if constexpr (std::is_same_v<L, law::Exponential>) {
          m["init.rate"] = fmt(l.rate);
        } else if constexpr (std::is_same_v<L, law::Pareto>) {
          m["init.shape"] = fmt(l.shape);
          m["init.scale"] = fmt(l.scale);
        } else if constexpr (std::is_same_v<L, law::TwoPoint>) {
          m["init.v1"] = fmt(l.v1);
          m["init.p"] = fmt(l.p);
          m["init.v2"] = fmt(l.v2);
        } else if constexpr (std::is_same_v<L, law::UniformInt>) {
          m["init.a"] = std::to_string(l.a);
          m["init.b"] = std::to_string(l.b);
        } else if constexpr (std::is_same_v<L, law::Geometric>) {
          m["init.p"] = fmt(l.p);
        } else {
          std::vector<std::string> vals;
          for (double v : l.values) vals.push_back(fmt(v));
          m["init.values"] = join(vals, ",");
          if (!l.shape.empty()) m["init.pattern_shape"] = join(l.shape, ",");
          m["init.random_shift"] = l.random_shift ? "true" : "false";
        }
      },
      c.init.law);

  m["run.seed"] = std::to_string(c.seed);
  m["run.max_steps"] = std::to_string(c.max_steps);
  m["run.threads"] = std::to_string(c.threads);
  m["run.cadence"] = std::to_string(c.cadence);
  m["run.stop_on_absorption"] = c.stop_on_absorption ? "true" : "false";
  m["run.audit"] = c.audit ? "true" : "false";
  m["run.type_window"] = std::to_string(c.type_window);
  std::vector<std::string> ds;
  for (double d : c.deltas) ds.push_back(fmt(d));
  m["observe.deltas"] = join(ds, ",");
  m["observe.ks"] = join(c.ks, ",");
  m["output.snapshot_steps"] = join(c.snapshot_steps, ",");
  m["output.snapshot_every"] = std::to_string(c.snapshot_every);
  return m;
}

std::vector<SweepPoint> expand_sweep(const ConfigFile& file) {
  ConfigFile base = file;
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  std::uint64_t seeds = 1;
  for (const auto& [key, value] : file.entries()) {
    if (key.rfind("sweep.", 0) != 0) continue;
    base.erase(key);
    if (key == "sweep.seeds") {
      seeds = parse_u64(key, value);
      if (seeds == 0) throw ConfigError(key, "must be >= 1");
      continue;
    }
    if (key == "sweep.parallel") continue;
    const std::string target = key.substr(6);
    if (!kKnownKeys.count(target)) throw ConfigError(key, "grid axis '" + target + "' is not a config key");
    auto values = split(value, '|');
    if (values.empty() || (values.size() == 1 && values.front().empty())) throw ConfigError(key, "empty grid axis");
    axes.emplace_back(target, std::move(values));
  }
  (void)parse_u64("sweep.parallel", file.get_string("sweep.parallel", "1"));

  const std::uint64_t base_seed = base.get_u64("run.seed", 0);
  std::vector<SweepPoint> points;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (;;) {
    for (std::uint64_t s = 0; s < seeds; ++s) {
      SweepPoint p;
      p.config = base;
      for (std::size_t a = 0; a < axes.size(); ++a) {
        p.config.set(axes[a].first, axes[a].second[idx[a]]);
        p.grid[axes[a].first] = axes[a].second[idx[a]];
      }
      p.seed = base_seed + s;
      p.config.set("run.seed", std::to_string(p.seed));
      points.push_back(std::move(p));
    }
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
      if (a == 0) return points;
    }
    if (axes.empty()) return points;
  }
}

int parallel_cap() {
  if (const char* env = std::getenv("DCLUST_MAX_PARALLEL")) {
    try {
      const auto v = parse_u64("DCLUST_MAX_PARALLEL", env);
      return v == 0 ? 0 : static_cast<int>(std::min<std::uint64_t>(v, 1024));
    } catch (const ConfigError&) {
      return 0;
    }
  }
  return 0;
}

int capped(int requested) {
  const int cap = parallel_cap();
  if (requested < 1) requested = 1;
  return cap > 0 && requested > cap ? cap : requested;
}

}  // namespace dclust::cli
