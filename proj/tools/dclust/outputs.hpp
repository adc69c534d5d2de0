#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <dclust/graph.hpp>
#include <dclust/init.hpp>
#include <dclust/stats.hpp>

namespace dclust::cli {

inline constexpr const char* kTimeseriesSchema = "timeseries/1";
inline constexpr const char* kSnapshotSchema = "snapshot/1";

std::vector<std::string> timeseries_columns(const std::vector<JointThreshold>& joint);

template <Resource T>
std::string timeseries_csv(const RunResult<T>& run);

/// One row per origin n = 0..last: n, origin_fraction, mass_fraction.
template <Resource T>
std::string moving_mass_csv(const RunResult<T>& run);

/// vertex, [layer,] x0..x{d-1}, value. The layer column appears only for
/// layered graphs.
template <Resource T>
std::string field_csv(const Graph& g, std::span<const T> values);

/// Parsed snapshot: values as doubles, +inf for Infinite.
std::vector<double> read_field_csv(const std::filesystem::path& path);

/// Binary P5, width = lengths[1], height = lengths[0]. Finite values are
/// min-max scaled to 0..255 (all pixels 0 when they are all equal);
/// Infinite renders as 255.
std::string field_pgm(std::size_t height, std::size_t width, const std::vector<double>& values);

std::string sha256_hex(std::string_view bytes);
void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

std::string csv_escape(const std::string& s);

}  // namespace dclust::cli
