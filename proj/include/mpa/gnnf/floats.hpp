//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <string>
#include <unordered_map>
#include <vector>

namespace mpa {

using Rational = boost::multiprecision::cpp_rational;

/// (+-d1..dp, +-e1..eq), read as +-0.d1..dp * beta^(+-e1..eq).
struct FloatNum {
  bool negative = false;
  std::vector<unsigned> digits;
  bool exp_negative = false;
  std::vector<unsigned> exp_digits;

  friend bool operator==(const FloatNum &, const FloatNum &) = default;
  friend auto operator<=>(const FloatNum &, const FloatNum &) = default;
};

/// Finite saturating floating-point system over (p, q, beta). All arithmetic
/// is exact on rationals and then rounded to the closest member; ties go
/// away from zero and results beyond the largest magnitude saturate. Every
/// value has one canonical encoding (the one with the smallest exponent, so
/// normalized whenever possible; zero is (+0..0, +0..0)).
class FloatSystem {
 public:
  FloatSystem(unsigned p, unsigned q, unsigned beta);

  /// Smallest base-2 system in which 0..k are exact integers.
  static FloatSystem for_counts(unsigned long k);

  unsigned p() const noexcept { return p_; }
  unsigned q() const noexcept { return q_; }
  unsigned beta() const noexcept { return beta_; }

  /// Distinct values, ascending. |F| counts values, not encodings.
  const std::vector<Rational> &values() const noexcept { return values_; }
  const Rational &max_value() const { return values_.back(); }

  /// Exact value of any well-formed encoding, canonical or not.
  Rational decode(const FloatNum &x) const;
  /// Position of x's value in values().
  std::size_t index_of(const FloatNum &x) const;
  FloatNum nearest(const Rational &r) const;
  FloatNum canonical(const FloatNum &x) const { return nearest(decode(x)); }

  FloatNum zero() const { return nearest(0); }
  /// Throws SystemTooSmall when 1 is not a member.
  FloatNum one() const;
  bool exact(const Rational &r) const;

  FloatNum fsum(const FloatNum &a, const FloatNum &b) const;
  FloatNum fmul(const FloatNum &a, const FloatNum &b) const;
  FloatNum relu_star(const FloatNum &x) const;

  /// Decimal literal such as "-0.375", "3", "1.5e-1" or a fraction "3/8".
  /// `exact` reports whether rounding was needed.
  FloatNum from_decimal(const std::string &text, bool *exact = nullptr) const;

  /// "(+1011,-01)"
  std::string to_string(const FloatNum &x) const;
  std::string describe() const;

 private:
  using Int = boost::multiprecision::cpp_int;
  /// Closest member to X / (Y * unit_), Y > 0.
  std::size_t nearest_index(const Int &X, const Int &Y) const;
  std::uint64_t key(const FloatNum &x) const;

  unsigned p_, q_, beta_;
  std::vector<Rational> values_;
  std::vector<FloatNum> encodings_;
  // values_[i] = scaled_[i] / unit_ with one common denominator.
  Int unit_;
  std::vector<Int> scaled_;
  std::unordered_map<std::uint64_t, std::size_t> by_encoding_;
};

/// "0", "-3/8", "5".
std::string rational_string(const Rational &r);

}  // namespace mpa
