#include "commands.hpp"

#include <atomic>
#include <chrono>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <dclust/run.hpp>
#include <dclust/value.hpp>

#include "outputs.hpp"

namespace dclust::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <Resource T>
RunSummary execute(const RunConfig& cfg, const fs::path& out_dir) {
  const Graph g = build_graph(cfg.graph);
  Field<T> initial = initial_field<T>(cfg, g);
  RunOptions<T> opts = run_options<T>(cfg);
  opts.threads = capped(cfg.threads);

  InvariantAudit<T> audit;
  const std::set<std::uint64_t> snap_steps(cfg.snapshot_steps.begin(), cfg.snapshot_steps.end());
  std::map<std::string, std::string> files;
  opts.observer = [&](const StepView<T>& view) {
    if (cfg.audit) audit.observe(view);
    const std::uint64_t n = view.report.step;
    if (snap_steps.count(n) || (cfg.snapshot_every > 0 && n % cfg.snapshot_every == 0))
      files["snapshots/step_" + std::to_string(n) + ".csv"] =
          field_csv<T>(g, std::span<const T>(view.field.values));
  };

  const auto t0 = std::chrono::steady_clock::now();
  const RunResult<T> result = run(g, std::move(initial), opts);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  files["timeseries.csv"] = timeseries_csv(result);
  files["moving_mass.csv"] = moving_mass_csv(result);
  files["final_field.csv"] = field_csv<T>(g, std::span<const T>(result.final_field.values));

  json outputs = json::array();
  for (const auto& [name, body] : files) {
    write_file(out_dir / name, body);
    outputs.push_back({{"file", name}, {"bytes", body.size()}, {"sha256", sha256_hex(body)}});
  }

  std::map<std::string, std::size_t> types{{"A", 0}, {"B", 0}, {"C", 0}, {"undetermined", 0}};
  for (VertexType t : vertex_type(result)) ++types[to_string(t)];

  const auto& last = result.rows.back();
  RunSummary s;
  s.absorbed = result.absorbed;
  s.absorption_step = result.absorption_step;
  s.steps_executed = result.steps_executed;
  s.active_count = std::to_string(last.active_count);
  s.max_cluster = std::to_string(last.max_cluster);
  s.moment_alpha2 = format_double(last.moment_alpha2);
  s.total_mass = ResourceTraits<T>::format(last.total_mass);
  s.wall_seconds = wall;
  s.audit_clean = audit.clean();

  json m;
  m["artifact"] = "dclust";
  m["version"] = kVersion;
  m["config"] = canonical(cfg);
  m["schema"] = {{"timeseries", kTimeseriesSchema},
                 {"columns", timeseries_columns(result.joint_thresholds)},
                 {"snapshot", kSnapshotSchema}};
  json res;
  res["absorbed"] = result.absorbed;
  res["absorption_step"] = result.absorption_step ? json(*result.absorption_step) : json(nullptr);
  res["steps_executed"] = result.steps_executed;
  res["rows"] = result.rows.size();
  res["final"] = {{"active_count", last.active_count},
                  {"max_cluster", last.max_cluster},
                  {"moment_alpha2", s.moment_alpha2},
                  {"total_mass", s.total_mass}};
  res["vertex_types"] = types;
  if (cfg.audit) {
    res["audit"] = {{"clean", audit.clean()},
                    {"steps_checked", audit.steps_checked()},
                    {"violations", audit.violations()},
                    {"max_relative_drift", format_double(audit.max_relative_drift())}};
  }
  m["result"] = res;
  m["outputs"] = outputs;
  m["digest"] = sha256_hex(m.dump());
  const double steps = static_cast<double>(result.steps_executed);
  m["timing"] = {{"wall_seconds", wall}, {"steps_per_second", wall > 0 ? steps / wall : 0.0}};
  write_file(out_dir / "manifest.json", m.dump(2) + "\n");
  s.manifest = std::move(m);
  return s;
}

std::string fraction_string(const oracle::Rational& r) {
  std::ostringstream os;
  os << numerator(r) << "/" << denominator(r);
  return os.str();
}

}  // namespace

RunSummary execute_run(const RunConfig& config, const fs::path& out_dir) {
  if (config.init.mode == ValueMode::exact) return execute<ExactValue>(config, out_dir);
  return execute<RealValue>(config, out_dir);
}

ConfigFile load_with_overrides(const CommandOptions& opts) {
  ConfigFile file = ConfigFile::load(opts.config);
  if (opts.seed) file.set("run.seed", std::to_string(*opts.seed));
  if (opts.out) file.set("output.dir", opts.out->string());
  return file;
}

json oracle_report_json(const oracle::ComparisonReport& report, double tolerance) {
  json outcomes = json::array();
  for (const auto& o : report.outcomes) {
    outcomes.push_back({{"config", o.config},
                        {"probability",
                         {{"numerator", boost::multiprecision::cpp_int(numerator(o.exact)).str()},
                          {"denominator", boost::multiprecision::cpp_int(denominator(o.exact)).str()}}},
                        {"probability_text", fraction_string(o.exact)},
                        {"count", o.count},
                        {"empirical", o.empirical},
                        {"abs_error", o.abs_error}});
  }
  return {{"horizon", report.horizon},
          {"trials", report.trials},
          {"seed", report.seed},
          {"tolerance", tolerance},
          {"pass", report.within(tolerance)},
          {"max_abs_error", report.max_abs_error},
          {"chi_square", report.chi_square},
          {"degrees_of_freedom", report.degrees_of_freedom},
          {"unexpected", report.unexpected},
          {"outcomes", outcomes}};
}

int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    ConfigFile file = load_with_overrides(opts);
    if (opts.parallel) file.set("run.threads", std::to_string(*opts.parallel));
    const RunConfig cfg = resolve(file);
    const RunSummary s = execute_run(cfg, cfg.out_dir);
    out << (s.absorbed ? "absorbed at step " + std::to_string(*s.absorption_step)
                       : "not absorbed after " + std::to_string(s.steps_executed) + " steps")
        << "; outputs in " << cfg.out_dir << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "dclust: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const OverflowError& e) {
    err << "dclust: arithmetic error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "dclust: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<SweepPoint> points;
  ConfigFile file;
  try {
    file = load_with_overrides(opts);
    points = expand_sweep(file);
  } catch (const ConfigError& e) {
    err << "dclust: config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const fs::path out_dir = file.get_string("output.dir", "out");
  const int parallel = capped(opts.parallel.value_or(static_cast<int>(file.get_u64("sweep.parallel", 1))));

  std::set<std::string> axis_set;
  for (const auto& p : points)
    for (const auto& [k, v] : p.grid) axis_set.insert(k);
  const std::vector<std::string> axes(axis_set.begin(), axis_set.end());

  struct Row {
    std::string status = "ok";
    std::string error;
    std::string kind;
    RunSummary summary;
  };
  std::vector<Row> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      Row& row = rows[i];
      row.kind = points[i].config.get_string("init.kind", "constant");
      try {
        const RunConfig cfg = resolve(points[i].config);
        std::ostringstream name;
        name << "run_" << std::setw(4) << std::setfill('0') << i;
        row.summary = execute_run(cfg, out_dir / name.str());
      } catch (const std::exception& e) {
        row.status = "error";
        row.error = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int n = std::min<int>(parallel, static_cast<int>(points.size()));
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }

  std::ostringstream csv;
  csv << "run";
  for (const auto& a : axes) csv << ',' << a;
  csv << ",seed,init_kind,status,absorbed,absorption_step,steps_executed,active_count,max_cluster,"
         "moment_alpha2,total_mass,error\n";
  std::size_t failures = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Row& r = rows[i];
    csv << i;
    for (const auto& a : axes) {
      const auto it = points[i].grid.find(a);
      csv << ',' << csv_escape(it == points[i].grid.end() ? "" : it->second);
    }
    csv << ',' << points[i].seed << ',' << csv_escape(r.kind) << ',' << r.status;
    if (r.status == "ok") {
      const auto& s = r.summary;
      csv << ',' << (s.absorbed ? "true" : "false") << ','
          << (s.absorption_step ? std::to_string(*s.absorption_step) : "") << ',' << s.steps_executed
          << ',' << s.active_count << ',' << s.max_cluster << ',' << s.moment_alpha2 << ','
          << s.total_mass << ',';
    } else {
      ++failures;
      csv << ",,,,,,,," << csv_escape(r.error);
    }
    csv << '\n';
  }
  try {
    write_file(out_dir / "sweep.csv", csv.str());
  } catch (const std::exception& e) {
    err << "dclust: " << e.what() << "\n";
    return kExitRuntime;
  }
  out << points.size() << " runs (" << failures << " failed); aggregate in " << (out_dir / "sweep.csv").string()
      << "\n";
  return kExitOk;
}

int cmd_oracle_check(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const ConfigFile file = load_with_overrides(opts);
    const RunConfig cfg = resolve(file);
    if (cfg.init.mode != ValueMode::exact)
      throw ConfigError("init.mode", "oracle-check requires an exact-mode (integer) initial field");
    const double tol = opts.tolerance.value_or(cfg.oracle_tolerance);
    if (!(tol >= 0)) throw ConfigError("--tolerance", "must be >= 0");
    const Graph g = build_graph(cfg.graph);
    const ExactField f0 = initial_field<ExactValue>(cfg, g);
    const auto report = oracle::compare_engine_oracle(g, f0, cfg.oracle_horizon, cfg.oracle_trials, cfg.seed);
    json doc = oracle_report_json(report, tol);
    doc["config"] = canonical(cfg);
    write_file(fs::path(cfg.out_dir) / "oracle_report.json", doc.dump(2) + "\n");
    const bool pass = report.within(tol);
    out << (pass ? "PASS" : "FAIL") << " max |empirical - exact| = " << format_double(report.max_abs_error)
        << " (tolerance " << format_double(tol) << ", " << report.outcomes.size() << " outcomes, "
        << report.unexpected << " unexpected)\n";
    return pass ? kExitOk : kExitCheckFailed;
  } catch (const ConfigError& e) {
    err << "dclust: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const oracle::GuardError& e) {
    err << "dclust: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "dclust: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_snapshot(const fs::path& run_dir, std::uint64_t step, const fs::path& out_dir, std::ostream& out,
                 std::ostream& err) {
  try {
    const json manifest = json::parse(read_file(run_dir / "manifest.json"));
    ConfigFile file;
    for (const auto& [k, v] : manifest.at("config").items()) file.set(k, v.get<std::string>());
    const RunConfig cfg = resolve(file);

    fs::path source = run_dir / "snapshots" / ("step_" + std::to_string(step) + ".csv");
    if (!fs::exists(source)) {
      if (manifest.at("result").at("steps_executed").get<std::uint64_t>() == step)
        source = run_dir / "final_field.csv";
      else
        throw std::runtime_error("step " + std::to_string(step) + " was not captured in " + run_dir.string());
    }
    const std::string body = read_file(source);
    const fs::path csv_path = out_dir / ("field_step" + std::to_string(step) + ".csv");
    write_file(csv_path, body);
    out << "wrote " << csv_path.string() << "\n";

    if (cfg.graph.kind == GraphKind::torus && cfg.graph.dimension() == 2) {
      const auto values = read_field_csv(source);
      const fs::path pgm_path = out_dir / ("field_step" + std::to_string(step) + ".pgm");
      write_file(pgm_path, field_pgm(cfg.graph.lengths[0], cfg.graph.lengths[1], values));
      out << "wrote " << pgm_path.string() << "\n";
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "dclust: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "dclust: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace dclust::cli
