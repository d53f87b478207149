#pragma once

#include "cmono/convolutions.hpp"
#include "cmono/cumulants.hpp"
#include "cmono/measures.hpp"
#include "cmono/transforms.hpp"

#include <string>
#include <vector>

namespace cmono {

// A(z) = -gamma + i drift + sum_x w_x (1 + x z)/(x - z), tau = sum w_x delta_x.
// A nonzero imaginary drift gives the Cauchy field A(z) = i b, which has no
// cumulants and lives only on the float track.
struct PickField {
  Rational gamma;
  std::vector<Atom> tau;  // positive weights, total mass need not be 1
  double imag_drift = 0.0;

  static PickField zero() { return {}; }
  static PickField arcsine(const Rational& variance);      // r_2 = variance
  static PickField monotone_poisson(const Rational& rho);  // r_n = rho
  static PickField drift(const Rational& a);               // r_1 = a
  static PickField cauchy(double b);

  Complex operator()(Complex z) const;
  PickField scaled(const Rational& s) const;
  friend PickField operator+(const PickField& a, const PickField& b);
  std::string str() const;
};

// Throws InvalidSpec unless all weights are positive and locations distinct.
void validate(const PickField& A);

// Min of Im A over the grid; negative means A does not map into the closed upper half-plane.
double min_imag_on_grid(const PickField& A, const std::vector<Complex>& grid);

// r_1 = gamma + sum w x, r_n = m_n(tau) + m_{n-2}(tau). Result holds r_1..r_K.
std::vector<Rational> field_to_cumulants(const PickField& A, int K);

// Inverse on exact data: (1 + x^2) tau has moments r_2, r_3, ...; uses the
// largest Gauss quadrature those moments determine. InvalidSpec when the nodes
// are irrational or the moments are not those of a positive measure.
PickField cumulants_to_field(const std::vector<Rational>& r);

// 40 points with Re in [-3, 3] and Im cycling through 0.5, 1, 2.
std::vector<Complex> default_flow_grid();

struct FlowPoint {
  Complex H;
  Complex F;
};

struct FlowOptions {
  double tol = 1e-12;  // per-step error, mixed absolute/relative
  double h0 = 1e-3;
  int max_steps = 2000000;
};

// Integrates dH/dt = A1(F), dF/dt = A2(F) from H = F = z0 (or from the given
// initial values) with embedded Dormand-Prince 5(4) steps.
FlowPoint integrate_point(const PickField& A1, const PickField& A2, Complex H0, Complex F0, double t,
                          const FlowOptions& opt = {});

struct FlowState {
  double t = 0;
  std::vector<Complex> grid;
  std::vector<Complex> H;
  std::vector<Complex> F;
  // min over the grid of Im F_t(z) - Im z and Im H_t(z) - Im z; both >= 0 for Pick fields
  double min_F_lift = 0;
  double min_H_lift = 0;
};

// Grid points must have Im z >= 0.5. Throws LeftUpperHalfPlane when a trajectory
// reaches the real axis.
FlowState integrate_flow(const PickField& A1, const PickField& A2, double t, const std::vector<Complex>& grid,
                         const FlowOptions& opt = {});

struct LawResidual {
  double s = 0, t = 0;
  double F_residual = 0;  // max |F_{s+t} - F_t o F_s|
  double H_residual = 0;  // max |H_{s+t} - (H_t o F_s - F_s + H_s)|
  double threshold = 1e-8;
  bool passed() const { return F_residual < threshold && H_residual < threshold; }
};

LawResidual verify_semigroup_law(const PickField& A1, const PickField& A2, double s, double t,
                                 const std::vector<Complex>& grid, const FlowOptions& opt = {});

// Moments m_1..m_K of mu_t (first) and nu_t (second), fitted from H_t and F_t on a
// small circle around infinity.
struct FittedMoments {
  std::vector<double> first, second;
};
FittedMoments fit_flow_moments(const PickField& A1, const PickField& A2, double t, int K);

// ---------------------------------------------------------------------------
// Infinite divisibility

struct HankelTest {
  bool exact_psd = false;  // exact LDL^T on rationals
  double min_eigenvalue = 0;
  bool float_psd = false;  // min eigenvalue >= -1e-10
  bool agree() const { return exact_psd == float_psd; }
};

// [r_{j+k}]_{1 <= j,k <= K}; needs r_2..r_{2K}, i.e. r.size() >= 2K.
HankelTest hankel_psd(const std::vector<Rational>& r, int K);

struct DivisibilityVerdict {
  int order = 0;
  HankelTest pair;    // from r(mu, nu)
  HankelTest single;  // from the monotone cumulants of nu
  bool divisible = false;     // exact verdict
  bool tracks_agree = true;   // exact and float verdicts coincide on both Hankels
  double min_eig() const { return std::min(pair.min_eigenvalue, single.min_eigenvalue); }
  // Truncated positivity is only a necessary condition.
  std::string label() const { return "order-" + std::to_string(order) + " necessary condition"; }
};

// InsufficientOrder unless both sequences reach 2K.
DivisibilityVerdict is_infinitely_divisible(const std::vector<Rational>& r_pair, const std::vector<Rational>& r_single,
                                            int K);
DivisibilityVerdict is_infinitely_divisible(const MomentSeq& mu, const MomentSeq& nu, int K);

// The unique n-th root: cumulants divided by n, moments rebuilt to the same order.
MomentPair nth_root(const CumulantSeq& pair_cumulants, int n);
MomentPair nth_root(const MomentPair& p, int n);

}  // namespace cmono
