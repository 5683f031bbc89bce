#pragma once

#include <compare>
#include <string>

namespace purederive {

/// Integer extended by -infinity and +infinity (totally ordered).
struct ExtendedInt {
  enum class Kind { NegInf, Finite, PosInf };
  Kind kind = Kind::Finite;
  long value = 0;

  static ExtendedInt neg_inf() { return {Kind::NegInf, 0}; }
  static ExtendedInt pos_inf() { return {Kind::PosInf, 0}; }
  static ExtendedInt finite(long v) { return {Kind::Finite, v}; }

  bool is_finite() const { return kind == Kind::Finite; }

  friend std::strong_ordering operator<=>(const ExtendedInt& a,
                                          const ExtendedInt& b) {
    auto rank = [](const ExtendedInt& x) {
      return x.kind == Kind::NegInf ? -1 : x.kind == Kind::PosInf ? 1 : 0;
    };
    if (rank(a) != rank(b)) return rank(a) <=> rank(b);
    if (a.kind == Kind::Finite) return a.value <=> b.value;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const ExtendedInt& a, const ExtendedInt& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

  std::string describe() const {
    if (kind == Kind::NegInf) return "-inf";
    if (kind == Kind::PosInf) return "+inf";
    return std::to_string(value);
  }
};

}  // namespace purederive
