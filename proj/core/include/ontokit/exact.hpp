#pragma once

// Exact scalars p + q*sqrt(r) with rational p, q and a fixed radicand r.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ontokit {

class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Normalized rational with 64-bit parts; any intermediate that does not
/// fit throws ArithmeticOverflow rather than wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Parses "n" or "n/m".
  static Rational parse(std::string_view text);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// p + q*sqrt(radicand). Two surds combine only when their radicands agree;
/// radicand 0 means "rational only".
class Surd {
 public:
  Surd() = default;
  Surd(Rational p, Rational q, std::int64_t radicand);

  /// Parses `p`, `q√r`, `p+q√r` (also `sqrt` for `√`). The radicand written
  /// in the token must equal `radicand`.
  static Surd parse(std::string_view token, std::int64_t radicand);

  const Rational& rational() const noexcept { return p_; }
  const Rational& irrational() const noexcept { return q_; }
  std::int64_t radicand() const noexcept { return r_; }
  bool is_zero() const noexcept { return p_.is_zero() && q_.is_zero(); }
  double to_double() const;
  std::string str() const;

  friend Surd operator+(const Surd& a, const Surd& b);
  friend Surd operator*(const Surd& a, const Surd& b);
  friend bool operator==(const Surd&, const Surd&) = default;

 private:
  Rational p_;
  Rational q_;
  std::int64_t r_ = 0;
};

/// True when r is a perfect square (so sqrt(r) is rational).
bool is_perfect_square(std::int64_t r);

}  // namespace ontokit
