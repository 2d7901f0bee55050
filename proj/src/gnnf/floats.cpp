//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/gnnf/floats.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "mpa/errors.hpp"

namespace mpa {

namespace {

using boost::multiprecision::cpp_int;

cpp_int ipow(unsigned base, unsigned e) {
  cpp_int r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

std::vector<unsigned> to_digits(cpp_int v, unsigned base, unsigned n) {
  std::vector<unsigned> d(n, 0);
  for (unsigned i = n; i-- > 0;) {
    d[i] = static_cast<unsigned>(v % base);
    v /= base;
  }
  return d;
}

}  // namespace

FloatSystem::FloatSystem(unsigned p, unsigned q, unsigned beta) : p_(p), q_(q), beta_(beta) {
  if (p == 0 || q == 0 || beta < 2) throw Error("float system needs p, q >= 1 and beta >= 2");
  const cpp_int sig_count = ipow(beta, p), exp_count = ipow(beta, q);
  if (sig_count * (2 * exp_count - 1) > 4'000'000) throw Error("float system too large to tabulate");
  const unsigned smax = static_cast<unsigned>(sig_count), emax = static_cast<unsigned>(exp_count) - 1;

  // Every value is s * beta^(e + emax) / beta^(p + emax).
  unit_ = ipow(beta, p + emax);
  std::map<cpp_int, FloatNum> positive;
  for (int e = -static_cast<int>(emax); e <= static_cast<int>(emax); ++e) {
    cpp_int shift = ipow(beta, static_cast<unsigned>(e + static_cast<int>(emax)));
    for (unsigned s = 1; s < smax; ++s)
      // Ascending exponents: the first encoding seen is the canonical one.
      positive.try_emplace(s * shift, FloatNum{false, to_digits(s, beta, p), e < 0,
                                               to_digits(std::abs(e), beta, q)});
  }
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    FloatNum n = it->second;
    n.negative = true;
    scaled_.push_back(-it->first);
    encodings_.push_back(std::move(n));
  }
  scaled_.push_back(0);
  encodings_.push_back(FloatNum{false, std::vector<unsigned>(p, 0), false,
                                std::vector<unsigned>(q, 0)});
  for (auto &[v, n] : positive) {
    scaled_.push_back(v);
    encodings_.push_back(n);
  }
  values_.reserve(scaled_.size());
  for (std::size_t i = 0; i < scaled_.size(); ++i) {
    values_.emplace_back(scaled_[i], unit_);
    by_encoding_.emplace(key(encodings_[i]), i);
  }
}

std::uint64_t FloatSystem::key(const FloatNum &x) const {
  std::uint64_t k = x.negative ? 1 : 0;
  for (auto d : x.digits) k = k * beta_ + d;
  k = k * 2 + (x.exp_negative ? 1 : 0);
  for (auto d : x.exp_digits) k = k * beta_ + d;
  return k;
}

std::size_t FloatSystem::nearest_index(const cpp_int &X, const cpp_int &Y) const {
  // First member with scaled * Y >= X.
  auto it = std::partition_point(scaled_.begin(), scaled_.end(),
                                 [&](const cpp_int &n) { return n * Y < X; });
  if (it == scaled_.end()) return scaled_.size() - 1;
  std::size_t hi = it - scaled_.begin();
  if (*it * Y == X || hi == 0) return hi;
  std::size_t lo = hi - 1;
  cpp_int dlo = X - scaled_[lo] * Y, dhi = scaled_[hi] * Y - X;
  if (dlo < dhi) return lo;
  if (dhi < dlo) return hi;
  return abs(scaled_[lo]) > abs(scaled_[hi]) ? lo : hi;
}

std::size_t FloatSystem::index_of(const FloatNum &x) const {
  if (x.digits.size() != p_ || x.exp_digits.size() != q_)
    throw Error("float encoding does not match " + describe());
  auto it = by_encoding_.find(key(x));
  if (it != by_encoding_.end() && encodings_[it->second] == x) return it->second;
  Rational v = decode(x);
  return nearest_index(boost::multiprecision::numerator(v) * unit_,
                       boost::multiprecision::denominator(v));
}

FloatSystem FloatSystem::for_counts(unsigned long k) {
  unsigned p = 1;
  while ((1UL << p) <= k) ++p;
  unsigned q = 1;
  while ((1U << q) - 1 < p) ++q;
  return FloatSystem(p, q, 2);
}

Rational FloatSystem::decode(const FloatNum &x) const {
  if (x.digits.size() != p_ || x.exp_digits.size() != q_)
    throw Error("float encoding does not match " + describe());
  if (auto it = by_encoding_.find(key(x));
      it != by_encoding_.end() && encodings_[it->second] == x)
    return values_[it->second];
  cpp_int s = 0, e = 0;
  for (auto d : x.digits) {
    if (d >= beta_) throw Error("float digit out of range");
    s = s * beta_ + d;
  }
  for (auto d : x.exp_digits) {
    if (d >= beta_) throw Error("float exponent digit out of range");
    e = e * beta_ + d;
  }
  unsigned ev = static_cast<unsigned>(e);
  Rational v(s, ipow(beta_, p_));
  v = x.exp_negative ? v / Rational(ipow(beta_, ev)) : v * Rational(ipow(beta_, ev));
  return x.negative ? Rational(-v) : v;
}

FloatNum FloatSystem::nearest(const Rational &r) const {
  return encodings_[nearest_index(boost::multiprecision::numerator(r) * unit_,
                                  boost::multiprecision::denominator(r))];
}

bool FloatSystem::exact(const Rational &r) const {
  return std::binary_search(values_.begin(), values_.end(), r);
}

FloatNum FloatSystem::one() const {
  if (!exact(1)) throw SystemTooSmall("1 is not representable in " + describe());
  return nearest(1);
}

FloatNum FloatSystem::fsum(const FloatNum &a, const FloatNum &b) const {
  return encodings_[nearest_index(scaled_[index_of(a)] + scaled_[index_of(b)], 1)];
}

FloatNum FloatSystem::fmul(const FloatNum &a, const FloatNum &b) const {
  return encodings_[nearest_index(scaled_[index_of(a)] * scaled_[index_of(b)], unit_)];
}

FloatNum FloatSystem::relu_star(const FloatNum &x) const {
  FloatNum unit = one();
  Rational v = decode(x);
  if (v <= 0) return zero();
  if (v >= 1) return unit;
  return canonical(x);
}

FloatNum FloatSystem::from_decimal(const std::string &text, bool *exact_out) const {
  Rational r;
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      r = Rational(cpp_int(text.substr(0, slash)), cpp_int(text.substr(slash + 1)));
    } else {
      std::size_t i = 0;
      bool neg = false;
      if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
      cpp_int mant = 0;
      int scale = 0;
      bool any = false, dot = false;
      for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
        if (text[i] == '.' && !dot) {
          dot = true;
          continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw Error("bad digit");
        mant = mant * 10 + (text[i] - '0');
        if (dot) --scale;
        any = true;
      }
      if (!any) throw Error("no digits");
      if (i < text.size()) scale += std::stoi(text.substr(i + 1));
      r = scale >= 0 ? Rational(mant * ipow(10, scale)) : Rational(mant, ipow(10, -scale));
      if (neg) r = -r;
    }
  } catch (const std::exception &) {
    throw SyntaxError("invalid number '" + text + "'", 1, 1);
  }
  if (exact_out) *exact_out = exact(r);
  return nearest(r);
}

std::string FloatSystem::to_string(const FloatNum &x) const {
  auto digit = [](unsigned d) {
    return static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10));
  };
  std::string out = "(";
  out += x.negative ? '-' : '+';
  for (auto d : x.digits) out += digit(d);
  out += x.exp_negative ? ",-" : ",+";
  for (auto d : x.exp_digits) out += digit(d);
  return out + ")";
}

std::string FloatSystem::describe() const {
  return "F(p=" + std::to_string(p_) + ",q=" + std::to_string(q_) +
         ",beta=" + std::to_string(beta_) + ")";
}

std::string rational_string(const Rational &r) {
  auto num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace mpa
