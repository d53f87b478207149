#pragma once

#include "cmono/convolutions.hpp"
#include "cmono/measures.hpp"
#include "cmono/transforms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cmono {

// Closed-form limit laws of the central limit and small-numbers theorems.
struct LimitLaw {
  enum class Kind {
    KestenCLT,          // (alpha2, beta2): pair-mode CLT, H = (1 - r) z + r sqrt(z^2 - 2 beta2), r = alpha2/beta2
    CMonotonePoisson,   // (lambda, rho): H = (1 - lambda/rho) z + (lambda/rho) H_{p_rho}
    DeformedCLT_t,      // (t): CLT under V_{t,u,0}, H = (1 - 1/t) z + (1/t) sqrt(z^2 - 2t)
    DeformedCLT_0a,     // (a): CLT under V_{0,0,a}, H = z - log1(1 + a/z)/a
    DeformedPoisson_ua, // (u, a, lambda): Poisson under V_{0,u,a}, H = z - lambda - log1(1 + c lambda/(z - 1))/c, c = a - u
    XiArcsineCLT,       // (t): CLT under Xi_t, same law as DeformedCLT_t
    XiArcsinePoisson,   // (t, lambda): Poisson under Xi_t
  };
  Kind kind = Kind::KestenCLT;
  std::vector<Rational> params;

  static LimitLaw kesten(const Rational& alpha2, const Rational& beta2);
  static LimitLaw cmonotone_poisson(const Rational& lambda, const Rational& rho);
  static LimitLaw deformed_clt_t(const Rational& t);
  static LimitLaw deformed_clt_0a(const Rational& a);
  static LimitLaw deformed_poisson(const Rational& u, const Rational& a, const Rational& lambda);
  static LimitLaw xi_arcsine_clt(const Rational& t);
  static LimitLaw xi_arcsine_poisson(const Rational& t, const Rational& lambda);

  // "kesten:a2,b2", "cmpoisson:lambda,rho", "clt_t:t", "clt_0a:a", "poisson_ua:u,a,lambda",
  // "xi_clt:t", "xi_poisson:t,lambda"
  static LimitLaw parse(const std::string& text);
  std::string str() const;
};

// Exact moments from the expansion of the closed form at infinity.
MomentSeq limit_law_moments(const LimitLaw& law, int K);

// Closed-form H; InvalidSpec for laws without one (CMonotonePoisson with lambda != 0).
AnalyticMap limit_law_h(const LimitLaw& law);

// Density of the absolutely continuous part where a closed formula is known.
std::optional<double> stated_density(const LimitLaw& law, double x);

struct LawGeometry {
  std::vector<Interval> ac_support;       // closed intervals carrying the density
  std::vector<Interval> atom_candidates;  // open intervals where H is real and increasing
};
LawGeometry limit_law_geometry(const LimitLaw& law);

struct DensityPoint {
  double x = 0;
  double density = 0;
  double spread = 0;
  bool converged = false;
};

struct DensityReport {
  std::vector<DensityPoint> table;
  std::vector<LocatedAtom> atoms;
  double ac_mass = 0;
  double atom_mass = 0;
  double total_mass() const { return ac_mass + atom_mass; }
};

// Stieltjes inversion of G = 1/H on the grid, atoms from the sign change of H on
// each candidate interval, and the absolutely continuous mass by quadrature.
DensityReport limit_law_density(const LimitLaw& law, const std::vector<double>& grid);

// ---------------------------------------------------------------------------
// Iterates

struct IterateResult {
  int N = 0;
  std::vector<double> moments;     // m_1..m_K
  std::optional<MomentSeq> exact;  // when every moment is rational
};

// (D_{1/sqrt N} mu)^{|>_T N}. Requires m_1 = 0 and m_2 = 1 (NotNormalized).
IterateResult clt_iterate(const MomentSeq& mu, const Transform& T, int N, int K);

// (D_{1/sqrt N} mu, D_{1/sqrt N} nu)^{|> N}. Requires mean zero in both slots.
struct PairIterateResult {
  IterateResult first, second;
};
PairIterateResult clt_iterate_pair(const MomentPair& p, int N, int K);

// ((1 - lambda/N) delta_0 + (lambda/N) delta_1)^{|>_T N}
IterateResult poisson_iterate(const Rational& lambda, const Transform& T, int N, int K);
// the same pair with rho in the second slot, under the pair product
PairIterateResult poisson_iterate_pair(const Rational& lambda, const Rational& rho, int N, int K);

// The closed-form limit of the CLT iterate under T, when one is known.
std::optional<LimitLaw> clt_limit_law(const Transform& T);
// Pair mode: Kesten(m_2(mu), m_2(nu)).
LimitLaw clt_limit_law(const MomentPair& p);
std::optional<LimitLaw> poisson_limit_law(const Transform& T, const Rational& lambda);

struct ConvergenceReport {
  std::vector<int> N;
  std::vector<double> max_error;
  std::vector<double> max_rel_error;  // |error| / max(1, |m_n|)
  // -d log(error) / d log(N) from a least-squares fit
  double slope = 0;
};

ConvergenceReport convergence_report(const std::vector<IterateResult>& runs, const MomentSeq& reference);

}  // namespace cmono
