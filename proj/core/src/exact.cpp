#include "ontokit/exact.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

namespace ontokit {

namespace {

__extension__ typedef __int128 i128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw ArithmeticOverflow("exact arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

std::int64_t parse_int(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
              static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

bool is_perfect_square(std::int64_t r) {
  if (r < 0) return false;
  auto s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(r))));
  while (s * s > r) --s;
  while ((s + 1) * (s + 1) <= r) ++s;
  return s * s == r;
}

Surd::Surd(Rational p, Rational q, std::int64_t radicand) : p_(p), q_(q), r_(radicand) {
  if (r_ < 0) throw std::invalid_argument("negative radicand");
  if (r_ == 0) q_ = Rational(0);
  if (r_ > 0 && is_perfect_square(r_)) {
    // sqrt(r) is rational; fold the irrational part into p.
    auto s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(r_))));
    p_ = p_ + q_ * Rational(s);
    q_ = Rational(0);
  }
}

Surd Surd::parse(std::string_view token, std::int64_t radicand) {
  static constexpr std::string_view kRoot = "\xE2\x88\x9A";  // U+221A
  std::string t(token);
  for (std::size_t pos; (pos = t.find("sqrt")) != std::string::npos;) t.replace(pos, 4, kRoot);

  const auto root = t.find(kRoot);
  if (root == std::string::npos) return Surd(Rational::parse(t), Rational(0), radicand);

  // Split "p+q√r": the rational part ends at the last sign before the root
  // that is not the leading sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = root; i-- > 1;) {
    if (t[i] == '+' || t[i] == '-') {
      split = i;
      break;
    }
  }
  Rational p(0);
  std::string qpart = t.substr(0, root);
  if (split != std::string::npos) {
    p = Rational::parse(std::string_view(t).substr(0, split));
    qpart = t.substr(split, root - split);
  }
  Rational q(1);
  if (qpart.empty() || qpart == "+") {
    q = Rational(1);
  } else if (qpart == "-") {
    q = Rational(-1);
  } else {
    if (qpart.back() == '*') qpart.pop_back();
    q = Rational::parse(qpart);
  }
  const std::string rtext = t.substr(root + kRoot.size());
  const std::int64_t r = parse_int(rtext);
  if (r != radicand) {
    throw std::invalid_argument("token '" + std::string(token) + "' uses radical " + rtext +
                                " but the header declares " + std::to_string(radicand));
  }
  return Surd(p, q, radicand);
}

double Surd::to_double() const {
  return p_.to_double() + q_.to_double() * std::sqrt(static_cast<double>(r_));
}

std::string Surd::str() const {
  if (q_.is_zero()) return p_.str();
  std::string s = p_.is_zero() ? "" : p_.str() + (q_.num() >= 0 ? "+" : "");
  return s + q_.str() + "\xE2\x88\x9A" + std::to_string(r_);
}

Surd operator+(const Surd& a, const Surd& b) {
  if (a.r_ != b.r_ && !a.q_.is_zero() && !b.q_.is_zero()) {
    throw std::invalid_argument("mixed radicands");
  }
  const std::int64_t r = a.q_.is_zero() ? b.r_ : a.r_;
  return Surd(a.p_ + b.p_, a.q_ + b.q_, r);
}

Surd operator*(const Surd& a, const Surd& b) {
  if (a.r_ != b.r_ && !a.q_.is_zero() && !b.q_.is_zero()) {
    throw std::invalid_argument("mixed radicands");
  }
  const std::int64_t r = a.q_.is_zero() ? b.r_ : a.r_;
  // (p1 + q1 s)(p2 + q2 s) = p1 p2 + q1 q2 r + (p1 q2 + q1 p2) s
  const Rational p = a.p_ * b.p_ + a.q_ * b.q_ * Rational(r);
  const Rational q = a.p_ * b.q_ + a.q_ * b.p_;
  return Surd(p, q, r);
}

}  // namespace ontokit
