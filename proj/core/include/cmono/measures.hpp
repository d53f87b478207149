#pragma once

#include "cmono/rational.hpp"
#include "cmono/series.hpp"

#include <random>
#include <string>
#include <variant>
#include <vector>

namespace cmono {

// Truncated moment sequence m_1..m_K (m_0 = 1 implicitly).
class MomentSeq {
 public:
  MomentSeq() = default;
  explicit MomentSeq(std::vector<Rational> m) : m_(std::move(m)) {}

  int order() const { return static_cast<int>(m_.size()); }
  // m(0) == 1
  Rational operator()(int n) const;
  const std::vector<Rational>& values() const { return m_; }

  Rational mean() const;
  Rational variance() const;
  MomentSeq truncated(int K) const;

  // M(w) = sum_{k>=0} m_k w^k, so that G(z) = w M(w) with w = 1/z.
  Series<Rational> generating_series() const;
  // B(w) = 1 / M(w), so that H(z) = z B(w).
  Series<Rational> h_series() const;
  static MomentSeq from_generating(const Series<Rational>& M);
  static MomentSeq from_h_series(const Series<Rational>& B);

  friend bool operator==(const MomentSeq& a, const MomentSeq& b) { return a.m_ == b.m_; }
  friend bool operator!=(const MomentSeq& a, const MomentSeq& b) { return !(a == b); }

 private:
  std::vector<Rational> m_;
};

struct Atom {
  Rational x;
  Rational w;
};

// Finitely many atoms; weights positive and summing to exactly 1, locations
// distinct and sorted.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms);

  static AtomicMeasure delta(const Rational& a);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  friend bool operator==(const AtomicMeasure& a, const AtomicMeasure& b);

 private:
  std::vector<Atom> atoms_;
};

struct ArcsineLaw {
  Rational variance;
};

// Kesten law nu_{alpha2,beta2} = U_r(arcsine with variance beta2), r = alpha2/beta2.
struct KestenLaw {
  Rational alpha2;
  Rational beta2;
  static KestenLaw from_sigma_r(const Rational& sigma2, const Rational& r);
  Rational sigma2() const { return beta2; }
  Rational r() const { return alpha2 / beta2; }
};

struct MonotonePoissonLaw {
  Rational rho;
};

struct CauchyLaw {
  Rational scale;
};

using NamedLaw = std::variant<ArcsineLaw, KestenLaw, MonotonePoissonLaw, CauchyLaw>;
using MeasureSpec = std::variant<AtomicMeasure, NamedLaw>;

void validate(const NamedLaw& law);
std::string describe(const NamedLaw& law);

MomentSeq moments_of_atomic(const AtomicMeasure& mu, int K);
MomentSeq moments_of_named(const NamedLaw& law, int K);
MomentSeq moments_of(const MeasureSpec& spec, int K);

AtomicMeasure dilate(const AtomicMeasure& mu, const Rational& lambda);
MomentSeq dilate(const MomentSeq& m, const Rational& lambda);

// 1..max_atoms atoms at distinct locations k/2, |k| <= 2 span, weights j/total with j in 1..4.
AtomicMeasure random_atomic(std::mt19937_64& rng, int max_atoms = 3, int span = 2);

// Moments of the arcsine law with the given variance, from H(z) = sqrt(z^2 - 2 var).
MomentSeq arcsine_moments(const Rational& variance, int K);

}  // namespace cmono
