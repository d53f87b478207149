#pragma once

#include "cmono/measures.hpp"
#include "cmono/poly.hpp"
#include "cmono/series.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cmono {

using Complex = std::complex<double>;

// P/Q with rational coefficients, kept reduced with a monic denominator so that
// equal maps compare equal.
class RationalMap {
 public:
  static constexpr int kDefaultDegreeCap = 256;

  RationalMap() : RationalMap(Poly::z()) {}
  RationalMap(Poly num, Poly den = Poly(1));  // NOLINT(google-explicit-constructor)

  static RationalMap identity() { return RationalMap(); }
  static RationalMap constant(const Rational& c) { return RationalMap(Poly(c)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  int degree() const { return std::max(num_.degree(), den_.degree()); }

  Rational operator()(const Rational& z) const;  // throws at a pole
  Complex operator()(Complex z) const;

  RationalMap& operator+=(const RationalMap& o);
  RationalMap& operator-=(const RationalMap& o);
  RationalMap& operator*=(const RationalMap& o);
  RationalMap& operator*=(const Rational& s);
  friend RationalMap operator+(RationalMap a, const RationalMap& b) { return a += b; }
  friend RationalMap operator-(RationalMap a, const RationalMap& b) { return a -= b; }
  friend RationalMap operator*(RationalMap a, const RationalMap& b) { return a *= b; }
  friend RationalMap operator*(RationalMap a, const Rational& s) { return a *= s; }
  friend RationalMap operator*(const Rational& s, RationalMap a) { return a *= s; }
  friend bool operator==(const RationalMap& a, const RationalMap& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RationalMap& a, const RationalMap& b) { return !(a == b); }

  // H(z)/z as a series in w = 1/z. Needs deg num = deg den + 1.
  Series<Rational> b_series(int K) const;

  // H(-z) = -H(z)
  bool is_odd() const;

  std::string str() const;

 private:
  void reduce();
  Poly num_, den_;
};

RationalMap compose(const RationalMap& f, const RationalMap& g, int degree_cap = RationalMap::kDefaultDegreeCap);

RationalMap h_of_atomic(const AtomicMeasure& mu);
RationalMap g_of_atomic(const AtomicMeasure& mu);

// Moments read off the expansion of H at infinity.
MomentSeq moments_of_h(const RationalMap& H, int K);

// A point mass of a recovered measure. Locations and weights carry ~50 digits;
// the exact fields are set whenever the location is rational.
struct WeightedPoint {
  HighFloat x;
  HighFloat w;
  std::optional<Rational> exact_x;
  std::optional<Rational> exact_w;
};

struct RecoveredMeasure {
  std::vector<WeightedPoint> atoms;
  bool exact = false;  // every atom has exact location and weight

  AtomicMeasure to_atomic() const;  // requires exact
  HighFloat total_mass() const;
};

// Inverse of h_of_atomic: atoms at the real zeros of H, weight 1/H'(x). Irrational
// zeros are refined to 2^-bits.
RecoveredMeasure measure_from_h(const RationalMap& H, int bits = 120);

// Is H the reciprocal Cauchy transform of some finitely atomic probability measure?
bool is_atomic_h(const RationalMap& H);

// H(z) = b + z + sum eta_x (1 + xz)/(x - z)
struct NevanlinnaForm {
  HighFloat b;
  std::optional<Rational> exact_b;
  std::vector<WeightedPoint> eta;
  Complex operator()(Complex z) const;
};

// H(z) = a + z + sum rho_x / (x - z), with a = -m and rho(R) = variance.
struct FiniteVarianceForm {
  Rational a;
  Rational rho_mass;
  std::vector<WeightedPoint> rho;
  Complex operator()(Complex z) const;
};

NevanlinnaForm nevanlinna_of(const RationalMap& H);
FiniteVarianceForm finite_variance_of(const RationalMap& H);

// Closed-form expression in z with the two logarithm branches used for limit laws:
//   log1: principal, arg in (-pi, pi), cut on (-inf, 0]
//   log2: arg in (0, 2 pi), cut on [0, inf)
//   sqrt(w) = exp(log2(w) / 2), so Im sqrt >= 0.
// Evaluating a log within 1e-14 of its cut throws BranchCutHit.
class AnalyticMap {
 public:
  struct Node;

  AnalyticMap();  // the variable z
  AnalyticMap(Complex c);  // NOLINT(google-explicit-constructor)
  AnalyticMap(double c) : AnalyticMap(Complex(c, 0.0)) {}  // NOLINT(google-explicit-constructor)

  static AnalyticMap z() { return AnalyticMap(); }

  friend AnalyticMap operator+(const AnalyticMap& a, const AnalyticMap& b);
  friend AnalyticMap operator-(const AnalyticMap& a, const AnalyticMap& b);
  friend AnalyticMap operator*(const AnalyticMap& a, const AnalyticMap& b);
  friend AnalyticMap operator/(const AnalyticMap& a, const AnalyticMap& b);
  friend AnalyticMap operator-(const AnalyticMap& a);
  friend AnalyticMap sqrt2(const AnalyticMap& a);
  friend AnalyticMap log1(const AnalyticMap& a);
  friend AnalyticMap log2(const AnalyticMap& a);

  Complex operator()(Complex z) const;
  // Limit from the upper half-plane at a real point, taken at height 1e-10.
  Complex boundary(double x) const;

  std::string str() const;

 private:
  explicit AnalyticMap(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Complex log_branch1(Complex w);
Complex log_branch2(Complex w);
Complex sqrt_branch(Complex w);

using ComplexFn = std::function<Complex(Complex)>;

struct LadderOptions {
  double eps0 = 1e-2;
  int levels = 7;        // eps_k = eps0 2^-k, k = 0..levels-1
  double tol = 1e-6;     // on the last two extrapolants, relative to max(1, |value|)
};

struct DensityEstimate {
  double value = 0;
  double spread = 0;  // |last extrapolant - previous|
  bool converged = false;
};

// -(1/pi) Im G(x + i eps), Richardson-extrapolated to eps -> 0.
DensityEstimate stieltjes_estimate(const ComplexFn& G, double x, const LadderOptions& opt = {});
// Same, throwing NonconvergentLadder when the ladder does not settle.
double stieltjes_density(const ComplexFn& G, double x, const LadderOptions& opt = {});

struct Interval {
  double lo, hi;  // open; infinite ends allowed
};

struct LocatedAtom {
  double x;
  double w;
};

// One atom per interval: the zero of the real-valued, increasing H on it.
LocatedAtom locate_atom(const ComplexFn& H_boundary, const Interval& iv);
std::vector<LocatedAtom> locate_atoms(const AnalyticMap& H, const std::vector<Interval>& intervals);

}  // namespace cmono
