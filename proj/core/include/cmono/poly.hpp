#pragma once

#include "cmono/rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace cmono {

using HighFloat = boost::multiprecision::cpp_bin_float_50;

// Univariate polynomial with rational coefficients; c[i] multiplies z^i.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);
  Poly(const Rational& constant);  // NOLINT(google-explicit-constructor)
  Poly(long constant) : Poly(Rational(constant)) {}  // NOLINT(google-explicit-constructor)

  static Poly z();
  static Poly monomial(const Rational& c, int degree);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for the zero polynomial
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const;
  Rational leading() const;

  Rational operator()(const Rational& x) const;
  std::complex<double> operator()(std::complex<double> x) const;
  HighFloat eval_high(const HighFloat& x) const;

  Poly derivative() const;
  Poly monic() const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& s);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator-(Poly a) { return a *= Rational(-1); }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  std::string str(const std::string& var = "z") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

struct DivMod {
  Poly quotient;
  Poly remainder;
};

DivMod divmod(const Poly& a, const Poly& b);
Poly gcd(Poly a, Poly b);  // monic; gcd(0,0) = 0
Poly pow(const Poly& p, int exponent);

// Sign of p at x without forming p(x) in full when p is zero polynomial: returns 0.
int sign_at(const Poly& p, const Rational& x);

struct RealRoot {
  Rational lo, hi;                // isolating interval, lo <= root <= hi
  std::optional<Rational> exact;  // set when the root is a (reasonably simple) rational
  HighFloat value;                // ~50 significant digits
};

// All real roots of a squarefree polynomial, ascending. Roots are isolated with a
// Sturm sequence and refined by exact dyadic bisection until the interval is
// narrower than 2^-bits (relative to max(1,|root|)).
std::vector<RealRoot> real_roots(const Poly& p, int bits = 120);

// Number of distinct real roots (p need not be squarefree).
int count_distinct_real_roots(const Poly& p);
// Distinct real roots strictly below x.
int count_roots_below(const Poly& p, const Rational& x);

}  // namespace cmono
