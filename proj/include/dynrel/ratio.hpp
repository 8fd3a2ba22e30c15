#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

namespace dynrel {

/// Exact non-negative ratio of event counts. Compared by value, never through
/// floating point, so ties are decided exactly.
struct Ratio {
  std::uint64_t numerator = 1;
  std::uint64_t denominator = 1;

  static Ratio one() { return {1, 1}; }

  friend bool operator==(const Ratio& a, const Ratio& b) {
    return static_cast<unsigned __int128>(a.numerator) * b.denominator ==
           static_cast<unsigned __int128>(b.numerator) * a.denominator;
  }

  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    const auto lhs = static_cast<unsigned __int128>(a.numerator) * b.denominator;
    const auto rhs = static_cast<unsigned __int128>(b.numerator) * a.denominator;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  Ratio reduced() const {
    const std::uint64_t g = std::gcd(numerator, denominator);
    return g == 0 ? *this : Ratio{numerator / g, denominator / g};
  }

  double value() const {
    return denominator == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(denominator);
  }

  /// Reduced form, e.g. `3/4`.
  std::string str() const {
    const Ratio r = reduced();
    return std::to_string(r.numerator) + "/" + std::to_string(r.denominator);
  }
};

}  // namespace dynrel
