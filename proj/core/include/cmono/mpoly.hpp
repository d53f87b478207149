#pragma once

#include "cmono/rational.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace cmono {

// Exponent vector, trailing zeros trimmed so equal monomials compare equal.
using Monomial = std::vector<unsigned>;

// Multivariate polynomial with rational coefficients over variables 0, 1, 2, ...
// Used as the formal-indeterminate ring for coefficient-level checks.
class MPoly {
 public:
  MPoly() = default;
  MPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  MPoly(long c) : MPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static MPoly var(int index);
  static MPoly term(const Rational& c, Monomial m);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  Rational coeff(const Monomial& m) const;

  // Highest variable index that occurs, or -1.
  int max_var() const;
  int degree_in(int var) const;
  // Coefficient of var^k as a polynomial in the remaining variables.
  MPoly coeff_of(int var, unsigned k) const;
  bool depends_on(int var) const { return degree_in(var) > 0; }

  Rational evaluate(const std::vector<Rational>& values) const;

  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);
  MPoly& operator*=(const Rational& s);
  MPoly& operator/=(const Rational& s) { return *this *= Rational(1) / s; }

  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(MPoly a, const MPoly& b) { return a *= b; }
  friend MPoly operator*(MPoly a, const Rational& s) { return a *= s; }
  friend MPoly operator*(const Rational& s, MPoly a) { return a *= s; }
  friend MPoly operator/(MPoly a, const Rational& s) { return a /= s; }
  friend MPoly operator-(MPoly a) { return a *= Rational(-1); }
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  std::string str(const std::function<std::string(int)>& name) const;
  std::string str() const;

 private:
  void add_term(const Monomial& m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

Monomial make_monomial(std::initializer_list<std::pair<int, unsigned>> powers);

}  // namespace cmono
