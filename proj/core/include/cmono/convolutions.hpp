#pragma once

#include "cmono/measures.hpp"
#include "cmono/transforms.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace cmono {

struct MomentPair {
  MomentSeq first, second;
  friend bool operator==(const MomentPair& a, const MomentPair& b) { return a.first == b.first && a.second == b.second; }
};

struct HPair {
  RationalMap first, second;
  friend bool operator==(const HPair& a, const HPair& b) { return a.first == b.first && a.second == b.second; }
};

// B-series composition: H_f o H_g / z = B_g(w) B_f(w / B_g(w)).
Series<Rational> compose_b(const Series<Rational>& Bf, const Series<Rational>& Bg);

// ---------------------------------------------------------------------------
// Moment-series track (any order, any input with moments)

MomentSeq monotone_convolve(const MomentSeq& mu, const MomentSeq& nu);
MomentSeq boolean_convolve(const MomentSeq& mu, const MomentSeq& nu);
MomentSeq orthogonal_convolve(const MomentSeq& mu, const MomentSeq& nu);
MomentPair cmonotone_convolve(const MomentPair& p1, const MomentPair& p2);
MomentPair cfree_convolve(const MomentPair& p1, const MomentPair& p2);

// mu^{boolean u}: H = u H_mu + (1 - u) z, formal for every rational u.
MomentSeq boolean_power(const MomentSeq& mu, const Rational& u);
// kappa^{u,v}(mu, nu) = mu^{boolean u} boolean-plus nu^{boolean v}
MomentSeq kappa(const Rational& u, const Rational& v, const MomentSeq& mu, const MomentSeq& nu);

MomentSeq monotone_power(const MomentSeq& mu, int N);
MomentPair cmonotone_power(const MomentPair& p, int N);

// ---------------------------------------------------------------------------
// Exact rational-map track (finitely atomic inputs)

RationalMap monotone_convolve(const RationalMap& Hmu, const RationalMap& Hnu);
RationalMap boolean_convolve(const RationalMap& Hmu, const RationalMap& Hnu);
RationalMap orthogonal_convolve(const RationalMap& Hmu, const RationalMap& Hnu);
HPair cmonotone_convolve(const HPair& p1, const HPair& p2);
RationalMap boolean_power(const RationalMap& H, const Rational& u);

RecoveredMeasure monotone_convolve(const AtomicMeasure& mu, const AtomicMeasure& nu);
RecoveredMeasure boolean_convolve(const AtomicMeasure& mu, const AtomicMeasure& nu);
RecoveredMeasure orthogonal_convolve(const AtomicMeasure& mu, const AtomicMeasure& nu);

// ---------------------------------------------------------------------------
// Measure transforms and deformed convolutions mu |>_T nu

namespace xform {
struct Identity {};
struct ToDelta0 {};
struct Ut {  // H = (1 - t) z + t H_mu
  Rational t;
};
struct Vtua {  // H = t H_mu + (1 - t) z + (t - u) m + a var
  Rational t, u, a;
  friend bool operator==(const Vtua& x, const Vtua& y) { return x.t == y.t && x.u == y.u && x.a == y.a; }
};
struct Fu {  // delta at u m
  Rational u;
};
struct XiT {  // arcsine law with variance t var (the arcsine semigroup at time t var)
  Rational t;
};
// Arcsine semigroup evaluated at an arbitrary functional f(mu). Formal when f < 0.
struct XiGeneral {
  std::function<Rational(const MomentSeq&)> f;
  std::string label;
};
}  // namespace xform

using Transform = std::variant<xform::Identity, xform::ToDelta0, xform::Ut, xform::Vtua, xform::Fu, xform::XiT,
                               xform::XiGeneral>;

std::string describe(const Transform& T);
// "identity", "delta0", "U:t", "V:t,u,a", "F:u", "Xi:t"
Transform parse_transform(const std::string& text);

// B-series of T mu; TransformInapplicable when mu lacks the moments T reads.
Series<Rational> transform_b(const Transform& T, const MomentSeq& mu);
MomentSeq apply_transform(const Transform& T, const MomentSeq& mu);
// Exact H of T mu for the rational-map track; the Xi transforms are not rational.
RationalMap apply_transform(const Transform& T, const RationalMap& Hmu);

MomentSeq deformed_convolve(const Transform& T, const MomentSeq& mu, const MomentSeq& nu);
RationalMap deformed_convolve(const Transform& T, const RationalMap& Hmu, const RationalMap& Hnu);
MomentSeq deformed_power(const Transform& T, const MomentSeq& mu, int N);

struct AssociativityReport {
  int pairs_checked = 0;
  int triples_checked = 0;
  int transform_failures = 0;   // T(mu |>_T nu) != T mu |> T nu
  int triple_failures = 0;      // (mu |>_T nu) |>_T l != mu |>_T (nu |>_T l)
  bool passed() const { return transform_failures == 0 && triple_failures == 0; }
};
AssociativityReport check_T_associativity(const Transform& T, const std::vector<MomentSeq>& samples);

xform::Vtua compose(const xform::Vtua& outer, const xform::Vtua& inner);  // outer after inner
xform::Vtua invert(const xform::Vtua& v);

// max |H_{A mu}(z) - H_{B mu}(z)| over the grid, both sides evaluated in double
// from their exact rational maps; A and B may be sequences applied right to left.
double transform_grid_residual(const std::vector<Transform>& A, const std::vector<Transform>& B,
                               const AtomicMeasure& mu, const std::vector<Complex>& grid);

enum class Cone { Positive, Symmetric };

// The closure criterion for V_{t,u,a}: u >= t and a = 0 (positive), a = 0 (symmetric).
bool cone_criterion(const xform::Vtua& v, Cone cone);

struct ConeReport {
  Cone cone = Cone::Positive;
  xform::Vtua transform;
  bool predicted_closed = false;
  int samples = 0;
  int violations = 0;
  std::string example;  // first violating pair, if any
  bool matches_prediction() const { return predicted_closed ? violations == 0 : violations > 0; }
};

ConeReport check_cone_preservation(const xform::Vtua& v, Cone cone, int samples, std::uint64_t seed);

// Membership tests on exact reciprocal Cauchy transforms.
bool in_positive_cone(const RationalMap& H);
bool in_symmetric_cone(const RationalMap& H);

}  // namespace cmono
