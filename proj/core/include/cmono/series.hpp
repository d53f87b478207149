#pragma once

#include "cmono/mpoly.hpp"
#include "cmono/rational.hpp"

#include <stdexcept>
#include <vector>

namespace cmono {

// Ring helpers shared by the templated formal-series code. A ring type R must
// support R(long), R(Rational), +, -, * and multiplication by Rational.
inline Rational ring_inverse(const Rational& c) {
  if (c == 0) throw std::domain_error("inverting zero");
  return Rational(1) / c;
}

inline MPoly ring_inverse(const MPoly& c) {
  if (!c.is_constant() || c.is_zero()) throw std::domain_error("inverting a non-constant polynomial");
  return MPoly(Rational(1) / c.constant_term());
}

// Truncated power series c0 + c1 w + ... + cK w^K. All operations keep the
// truncation order K of their inputs (the minimum when two orders differ).
template <class R>
class Series {
 public:
  Series() = default;
  explicit Series(int order) : c_(static_cast<std::size_t>(order) + 1, R(0)) {}
  Series(std::vector<R> coeffs, int order) : c_(std::move(coeffs)) { c_.resize(static_cast<std::size_t>(order) + 1, R(0)); }

  static Series constant(const R& value, int order) {
    Series s(order);
    s.c_[0] = value;
    return s;
  }
  static Series identity(int order) {  // the series w
    Series s(order);
    if (order >= 1) s.c_[1] = R(1);
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const R& operator[](int i) const { return c_.at(static_cast<std::size_t>(i)); }
  R& operator[](int i) { return c_.at(static_cast<std::size_t>(i)); }
  const std::vector<R>& coeffs() const { return c_; }

  Series truncated(int order) const {
    Series s(order);
    for (int i = 0; i <= std::min(order, this->order()); ++i) s.c_[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)];
    return s;
  }

  Series& operator+=(const Series& o) {
    shrink_to(o.order());
    for (int i = 0; i <= order(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Series& operator-=(const Series& o) {
    shrink_to(o.order());
    for (int i = 0; i <= order(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Series& operator*=(const Rational& s) {
    for (auto& x : c_) x = x * s;
    return *this;
  }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(Series a, const Rational& s) { return a *= s; }
  friend Series operator*(const Rational& s, Series a) { return a *= s; }
  friend Series operator-(Series a) { return a *= Rational(-1); }

  friend Series operator*(const Series& a, const Series& b) {
    int K = std::min(a.order(), b.order());
    Series r(K);
    for (int i = 0; i <= K; ++i) {
      if (is_zero_coeff(a.c_[i])) continue;
      for (int j = 0; i + j <= K; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }

  Series scaled_by(const R& s) const {
    Series r = *this;
    for (auto& x : r.c_) x = x * s;
    return r;
  }

  // w * this, keeping the same order (the top coefficient drops out).
  Series times_w() const {
    Series r(order());
    for (int i = order(); i >= 1; --i) r.c_[i] = c_[i - 1];
    return r;
  }

  // this / w; requires c0 == 0 and loses one order.
  Series divided_by_w() const {
    if (!is_zero_coeff(c_[0])) throw std::domain_error("series not divisible by w");
    Series r(order() - 1);
    for (int i = 1; i <= order(); ++i) r.c_[i - 1] = c_[i];
    return r;
  }

  Series inverse() const {
    Series r(order());
    R inv0 = ring_inverse(c_[0]);
    r.c_[0] = inv0;
    for (int n = 1; n <= order(); ++n) {
      R acc(0);
      for (int k = 1; k <= n; ++k) acc += c_[k] * r.c_[n - k];
      r.c_[n] = R(0) - acc * inv0;
    }
    return r;
  }

  // this(g(w)) for g with zero constant term.
  Series compose(const Series& g) const {
    if (!is_zero_coeff(g.c_[0])) throw std::domain_error("composition needs g(0) = 0");
    int K = std::min(order(), g.order());
    Series result = Series::constant(c_[0], K);
    Series power = g.truncated(K);
    for (int k = 1; k <= K; ++k) {
      if (!is_zero_coeff(c_[k])) result += power.scaled_by(c_[k]);
      if (k < K) power = power * g.truncated(K);
    }
    return result;
  }

  // Compositional inverse of g = w + g2 w^2 + ... (requires g1 invertible).
  Series reversion() const {
    if (!is_zero_coeff(c_[0])) throw std::domain_error("reversion needs g(0) = 0");
    int K = order();
    R inv1 = ring_inverse(c_[1]);
    Series h = Series::identity(K).scaled_by(inv1);
    // fixed point h <- h - (g(h) - w) / g1, one correct coefficient per pass
    for (int pass = 1; pass < K; ++pass) {
      Series err = compose_with(h) - Series::identity(K);
      h -= err.scaled_by(inv1);
    }
    return h;
  }

  // sqrt for c0 == 1
  Series sqrt_unit() const {
    if (c_[0] != R(1)) throw std::domain_error("sqrt_unit needs constant term 1");
    Series s(order());
    s.c_[0] = R(1);
    for (int n = 1; n <= order(); ++n) {
      R acc = c_[n];
      for (int k = 1; k < n; ++k) acc -= s.c_[k] * s.c_[n - k];
      s.c_[n] = acc * rat(1, 2);
    }
    return s;
  }

  // log for c0 == 1, via log f = integral of f'/f
  Series log_unit() const {
    if (c_[0] != R(1)) throw std::domain_error("log_unit needs constant term 1");
    int K = order();
    if (K == 0) return Series(0);
    Series deriv(K - 1);
    for (int i = 1; i <= K; ++i) deriv.c_[i - 1] = c_[i] * Rational(i);
    Series q = deriv * truncated(K - 1).inverse();
    Series r(K);
    for (int i = 0; i < K; ++i) r.c_[i + 1] = q.c_[i] * (Rational(1) / Rational(i + 1));
    return r;
  }

  friend bool operator==(const Series& a, const Series& b) { return a.c_ == b.c_; }

 private:
  static bool is_zero_coeff(const R& x) { return x == R(0); }
  void shrink_to(int k) {
    if (k < order()) c_.resize(static_cast<std::size_t>(k) + 1);
  }
  Series compose_with(const Series& g) const { return compose(g); }

  std::vector<R> c_;
};

// Polynomial in a single variable t with ring coefficients (moment polynomials).
template <class R>
class TPoly {
 public:
  TPoly() = default;
  explicit TPoly(std::vector<R> c) : c_(std::move(c)) {}
  static TPoly constant(const R& c) { return TPoly(std::vector<R>{c}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  R coeff(int i) const { return (i >= 0 && i <= degree()) ? c_[static_cast<std::size_t>(i)] : R(0); }

  TPoly& operator+=(const TPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  friend TPoly operator+(TPoly a, const TPoly& b) { return a += b; }
  friend TPoly operator*(const TPoly& a, const TPoly& b) {
    if (a.c_.empty() || b.c_.empty()) return TPoly();
    std::vector<R> r(a.c_.size() + b.c_.size() - 1, R(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return TPoly(std::move(r));
  }
  TPoly scaled(const R& s) const {
    TPoly r = *this;
    for (auto& x : r.c_) x = x * s;
    return r;
  }
  // antiderivative vanishing at t = 0
  TPoly integral() const {
    std::vector<R> r(c_.size() + 1, R(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i + 1] = c_[i] * (Rational(1) / Rational(static_cast<long>(i) + 1));
    return TPoly(std::move(r));
  }
  R at(const Rational& t) const {
    R acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

 private:
  std::vector<R> c_;
};

}  // namespace cmono
