#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include "liederiv/errors.hpp"

namespace liederiv {

enum class Mode { Exact, Approx };

std::string_view mode_name(Mode m);

// A coefficient: either an exact rational or a binary double.
//
// Arithmetic between an Exact and an Approx value throws ModeMismatch; there is
// no implicit promotion in either direction. Use to_approx() explicitly.
class Scalar {
 public:
  Scalar() : value_(mpq_class(0)) {}

  static Scalar rational(const mpq_class& q);
  static Scalar rational(long num, long den = 1);
  static Scalar real(double v) { return Scalar(v); }
  static Scalar from_int(long v, Mode m);
  static Scalar zero(Mode m) { return from_int(0, m); }
  static Scalar one(Mode m) { return from_int(1, m); }

  // Parses `12`, `-3/4`, or a decimal such as `0.25` / `1e-3`.
  // Decimals in Exact mode are converted to the exact rational they denote.
  static Scalar parse(std::string_view text, Mode m);

  Mode mode() const { return std::holds_alternative<mpq_class>(value_) ? Mode::Exact : Mode::Approx; }
  bool is_exact() const { return mode() == Mode::Exact; }
  bool is_zero() const;
  bool is_one() const;
  int sign() const;

  const mpq_class& as_rational() const;
  double to_double() const;
  Scalar to_approx() const { return Scalar(to_double()); }
  Scalar to_mode(Mode m) const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  // Throws ModeMismatch when the modes differ.
  bool operator==(const Scalar& o) const;

  Scalar abs() const { return sign() < 0 ? -*this : *this; }
  Scalar pow(int e) const;

  // `num/den` (or `num`) for Exact, shortest round-trip decimal for Approx.
  std::string str() const;

 private:
  explicit Scalar(mpq_class q) : value_(std::move(q)) {}
  explicit Scalar(double d) : value_(d) {}

  std::variant<mpq_class, double> value_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

// |a - b| <= tol for Approx values; exact equality for Exact ones.
bool approx_equal(const Scalar& a, const Scalar& b, double tol);

}  // namespace liederiv
