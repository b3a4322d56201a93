#include "liederiv/scalar.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace liederiv {

std::string_view mode_name(Mode m) { return m == Mode::Exact ? "exact" : "approx"; }

Scalar Scalar::rational(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  return Scalar(std::move(c));
}

Scalar Scalar::rational(long num, long den) {
  if (den == 0) throw PreconditionError("zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(std::move(q));
}

Scalar Scalar::from_int(long v, Mode m) {
  return m == Mode::Exact ? Scalar(mpq_class(v)) : Scalar(static_cast<double>(v));
}

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// Exact value of a decimal literal `[-]ddd[.ddd][e[+-]dd]`.
mpq_class parse_decimal_exact(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    bool exp_neg = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_neg = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!is_digits(exp_part)) throw PreconditionError("malformed number: " + std::string(text));
    exponent = std::stol(std::string(exp_part));
    if (exp_neg) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if ((!whole.empty() && !is_digits(whole)) || (!frac.empty() && !is_digits(frac)) ||
        whole.size() + frac.size() == 0)
      throw PreconditionError("malformed number: " + std::string(text));
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!is_digits(s)) throw PreconditionError("malformed number: " + std::string(text));
    digits = std::string(s);
  }
  mpz_class num(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  mpq_class q = exponent >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

}  // namespace

Scalar Scalar::parse(std::string_view text, Mode m) {
  if (text.empty()) throw PreconditionError("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash), den = text.substr(slash + 1);
    std::string_view num_digits = num;
    if (!num_digits.empty() && num_digits.front() == '-') num_digits.remove_prefix(1);
    if (!is_digits(num_digits) || !is_digits(den))
      throw PreconditionError("malformed rational: " + std::string(text));
    mpq_class q(mpz_class(std::string(num), 10), mpz_class(std::string(den), 10));
    if (q.get_den() == 0) throw PreconditionError("zero denominator");
    q.canonicalize();
    Scalar s(std::move(q));
    return m == Mode::Exact ? s : s.to_approx();
  }
  if (m == Mode::Exact) return Scalar(parse_decimal_exact(text));
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw PreconditionError("malformed number: " + std::string(text));
  return Scalar(v);
}

bool Scalar::is_zero() const {
  if (auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q) == 0;
  return std::get<double>(value_) == 0.0;
}

bool Scalar::is_one() const {
  if (auto* q = std::get_if<mpq_class>(&value_)) return *q == 1;
  return std::get<double>(value_) == 1.0;
}

int Scalar::sign() const {
  if (auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q);
  double d = std::get<double>(value_);
  return (d > 0) - (d < 0);
}

const mpq_class& Scalar::as_rational() const {
  if (auto* q = std::get_if<mpq_class>(&value_)) return *q;
  throw ModeMismatch();
}

double Scalar::to_double() const {
  if (auto* q = std::get_if<mpq_class>(&value_)) return q->get_d();
  return std::get<double>(value_);
}

Scalar Scalar::to_mode(Mode m) const {
  if (m == mode()) return *this;
  if (m == Mode::Approx) return to_approx();
  throw ExactnessUnavailable("cannot convert an Approx scalar to Exact");
}

Scalar Scalar::operator-() const {
  if (auto* q = std::get_if<mpq_class>(&value_)) return Scalar(mpq_class(-*q));
  return Scalar(-std::get<double>(value_));
}

#define LIEDERIV_SCALAR_OP(op)                                                      \
  Scalar& Scalar::operator op##=(const Scalar& o) {                                  \
    if (mode() != o.mode()) throw ModeMismatch();                                    \
    if (auto* q = std::get_if<mpq_class>(&value_))                                   \
      *q op## = std::get<mpq_class>(o.value_);                                       \
    else                                                                             \
      std::get<double>(value_) op## = std::get<double>(o.value_);                    \
    return *this;                                                                    \
  }

LIEDERIV_SCALAR_OP(+)
LIEDERIV_SCALAR_OP(-)
LIEDERIV_SCALAR_OP(*)
#undef LIEDERIV_SCALAR_OP

Scalar& Scalar::operator/=(const Scalar& o) {
  if (mode() != o.mode()) throw ModeMismatch();
  if (o.is_zero()) throw PreconditionError("division by zero");
  if (auto* q = std::get_if<mpq_class>(&value_))
    *q /= std::get<mpq_class>(o.value_);
  else
    std::get<double>(value_) /= std::get<double>(o.value_);
  return *this;
}

bool Scalar::operator==(const Scalar& o) const {
  if (mode() != o.mode()) throw ModeMismatch();
  if (auto* q = std::get_if<mpq_class>(&value_)) return *q == std::get<mpq_class>(o.value_);
  return std::get<double>(value_) == std::get<double>(o.value_);
}

Scalar Scalar::pow(int e) const {
  if (e < 0) return one(mode()) / pow(-e);
  Scalar result = one(mode()), base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

std::string Scalar::str() const {
  if (auto* q = std::get_if<mpq_class>(&value_)) return q->get_str();
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, std::get<double>(value_));
  std::string s(buf, ptr);
  // Keep Approx literals visibly decimal so they never read back as rationals.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

bool approx_equal(const Scalar& a, const Scalar& b, double tol) {
  if (a.mode() != b.mode()) throw ModeMismatch();
  if (a.is_exact()) return a == b;
  return std::fabs(a.to_double() - b.to_double()) <= tol;
}

}  // namespace liederiv
