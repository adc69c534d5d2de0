#pragma once

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace dclust {

enum class ValueMode { exact, real };

inline const char* to_string(ValueMode mode) { return mode == ValueMode::exact ? "exact" : "real"; }

// Raised when an exact-mode sum leaves the representable range.
class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ExactValue = std::uint64_t;
using RealValue = double;

template <class T>
struct ResourceTraits;

// Exact mode: unsigned 64-bit integers. The all-ones pattern is reserved for
// Infinite, so the largest finite resource is 2^64 - 2.
template <>
struct ResourceTraits<ExactValue> {
  static constexpr ValueMode mode = ValueMode::exact;

  static constexpr ExactValue zero() noexcept { return 0; }
  static constexpr ExactValue infinite() noexcept { return std::numeric_limits<ExactValue>::max(); }
  static constexpr bool is_infinite(ExactValue v) noexcept { return v == infinite(); }

  /// Returns false on overflow; `out` is left unspecified in that case.
  static bool try_add(ExactValue a, ExactValue b, ExactValue& out) noexcept {
    if (is_infinite(a) || is_infinite(b)) {
      out = infinite();
      return true;
    }
    if (__builtin_add_overflow(a, b, &out)) return false;
    return !is_infinite(out);
  }

  static ExactValue add(ExactValue a, ExactValue b) {
    ExactValue out;
    if (!try_add(a, b, out)) throw OverflowError("exact resource sum overflows 64-bit range");
    return out;
  }

  // hi >= lo is required. Infinite - Infinite is taken as 0 (a tie).
  static ExactValue gap(ExactValue hi, ExactValue lo) noexcept {
    if (is_infinite(hi)) return is_infinite(lo) ? 0 : infinite();
    return hi - lo;
  }

  static double to_double(ExactValue v) noexcept {
    return is_infinite(v) ? std::numeric_limits<double>::infinity() : static_cast<double>(v);
  }

  static std::string format(ExactValue v) { return is_infinite(v) ? "inf" : std::to_string(v); }
};

// Real mode: IEEE doubles; +inf is Infinite and the usual IEEE rules give
// Infinite + v = Infinite and Infinite == Infinite.
template <>
struct ResourceTraits<RealValue> {
  static constexpr ValueMode mode = ValueMode::real;

  static constexpr RealValue zero() noexcept { return 0.0; }
  static constexpr RealValue infinite() noexcept { return std::numeric_limits<RealValue>::infinity(); }
  static bool is_infinite(RealValue v) noexcept { return std::isinf(v); }

  static bool try_add(RealValue a, RealValue b, RealValue& out) noexcept {
    out = a + b;
    return true;
  }
  static RealValue add(RealValue a, RealValue b) noexcept { return a + b; }

  static RealValue gap(RealValue hi, RealValue lo) noexcept {
    if (is_infinite(hi)) return is_infinite(lo) ? 0.0 : infinite();
    return hi - lo;
  }

  static double to_double(RealValue v) noexcept { return v; }

  static std::string format(RealValue v);
};

/// Shortest decimal string that parses back to the same double; "inf" for +inf.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string ResourceTraits<RealValue>::format(RealValue v) { return format_double(v); }

template <class T>
concept Resource = std::same_as<T, ExactValue> || std::same_as<T, RealValue>;

/// Running total of a field. Exact mode is checked integer addition; real
/// mode uses Neumaier compensated summation in a fixed visiting order.
template <Resource T>
class MassAccumulator;

template <>
class MassAccumulator<ExactValue> {
 public:
  void add(ExactValue v) { sum_ = ResourceTraits<ExactValue>::add(sum_, v); }
  ExactValue total() const noexcept { return sum_; }

 private:
  ExactValue sum_ = 0;
};

template <>
class MassAccumulator<RealValue> {
 public:
  void add(RealValue v) noexcept {
    const double t = sum_ + v;
    if (std::isinf(t)) {
      sum_ = t;
      comp_ = 0.0;
      return;
    }
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  RealValue total() const noexcept { return std::isinf(sum_) ? sum_ : sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace dclust
