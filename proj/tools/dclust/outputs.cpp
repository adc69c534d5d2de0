#include "outputs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "config.hpp"
#include "run_config.hpp"

namespace dclust::cli {

std::vector<std::string> timeseries_columns(const std::vector<JointThreshold>& joint) {
  std::vector<std::string> cols = {"step",    "activity", "ties",     "count_A",      "count_B",
                                   "count_C", "count_D",  "count_E",  "max_gap",      "mean_gap",
                                   "active_count", "max_cluster", "moment_alpha2"};
  for (const auto& j : joint) cols.push_back(joint_column_name(j));
  cols.push_back("total_mass");
  return cols;
}

template <Resource T>
std::string timeseries_csv(const RunResult<T>& run) {
  std::ostringstream os;
  const auto cols = timeseries_columns(run.joint_thresholds);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : run.rows) {
    os << r.step << ',' << format_double(r.activity) << ',' << r.ties;
    for (std::size_t c : r.counts) os << ',' << c;
    os << ',' << ResourceTraits<T>::format(r.max_gap) << ',' << format_double(r.mean_gap) << ','
       << r.active_count << ',' << r.max_cluster << ',' << format_double(r.moment_alpha2);
    for (double j : r.joint) os << ',' << format_double(j);
    os << ',' << ResourceTraits<T>::format(r.total_mass) << '\n';
  }
  return os.str();
}

template <Resource T>
std::string moving_mass_csv(const RunResult<T>& run) {
  std::ostringstream os;
  os << "n,origin_fraction,mass_fraction\n";
  const std::uint64_t last = run.absorption_step.value_or(run.steps_executed);
  for (std::uint64_t n = 0; n <= last; ++n) {
    const auto m = moving_mass_fraction(run, n);
    os << n << ',' << format_double(m.origin_fraction) << ',' << format_double(m.mass_fraction) << '\n';
  }
  return os.str();
}

template <Resource T>
std::string field_csv(const Graph& g, std::span<const T> values) {
  std::ostringstream os;
  const bool layered = g.kind() == GraphKind::layered;
  os << "vertex";
  if (layered) os << ",layer";
  for (std::size_t i = 0; i < g.dimension(); ++i) os << ",x" << i;
  os << ",value\n";
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    const Site s = g.site_of(x);
    os << x;
    if (layered) os << ',' << s.layer;
    for (auto c : s.coords) os << ',' << c;
    os << ',' << ResourceTraits<T>::format(values[x]) << '\n';
  }
  return os.str();
}

std::vector<double> read_field_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("vertex", 0) != 0)
    throw std::runtime_error(path.string() + ": not a field snapshot");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    const auto id = parse_u64(path.string(), line.substr(0, line.find(',')));
    if (id != values.size()) throw std::runtime_error(path.string() + ": vertex ids out of order");
    values.push_back(parse_double(path.string(), line.substr(comma + 1)));
  }
  return values;
}

std::string field_pgm(std::size_t height, std::size_t width, const std::vector<double>& values) {
  if (values.size() != height * width) throw std::invalid_argument("pgm: size mismatch");
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (double v : values)
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.reserve(out.size() + values.size());
  for (double v : values) {
    unsigned char px = 0;
    if (std::isinf(v))
      px = 255;
    else if (hi > lo)
      px = static_cast<unsigned char>(std::lround(255.0 * (v - lo) / (hi - lo)));
    out.push_back(static_cast<char>(px));
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

template std::string timeseries_csv(const RunResult<ExactValue>&);
template std::string timeseries_csv(const RunResult<RealValue>&);
template std::string moving_mass_csv(const RunResult<ExactValue>&);
template std::string moving_mass_csv(const RunResult<RealValue>&);
template std::string field_csv(const Graph&, std::span<const ExactValue>);
template std::string field_csv(const Graph&, std::span<const RealValue>);

}  // namespace dclust::cli
