#include "cmono/semigroups.hpp"

#include "cmono/error.hpp"
#include "cmono/parallel.hpp"
#include "cmono/poly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cmono {

// ---------------------------------------------------------------------------
// Fields

PickField PickField::arcsine(const Rational& variance) { return {Rational(0), {{Rational(0), variance}}, 0.0}; }

PickField PickField::monotone_poisson(const Rational& rho) {
  return {rho / 2, {{Rational(1), rho / 2}}, 0.0};
}

PickField PickField::drift(const Rational& a) { return {a, {}, 0.0}; }

PickField PickField::cauchy(double b) { return {Rational(0), {}, b}; }

Complex PickField::operator()(Complex z) const {
  Complex acc(-to_double(gamma), imag_drift);
  for (const auto& a : tau) {
    double x = to_double(a.x);
    acc += to_double(a.w) * (1.0 + x * z) / (x - z);
  }
  return acc;
}

PickField PickField::scaled(const Rational& s) const {
  PickField out{gamma * s, tau, imag_drift * to_double(s)};
  for (auto& a : out.tau) a.w *= s;
  if (s == 0) out.tau.clear();
  return out;
}

PickField operator+(const PickField& a, const PickField& b) {
  PickField out{a.gamma + b.gamma, a.tau, a.imag_drift + b.imag_drift};
  for (const auto& atom : b.tau) {
    auto it = std::find_if(out.tau.begin(), out.tau.end(), [&](const Atom& o) { return o.x == atom.x; });
    if (it != out.tau.end())
      it->w += atom.w;
    else
      out.tau.push_back(atom);
  }
  std::sort(out.tau.begin(), out.tau.end(), [](const Atom& p, const Atom& q) { return p.x < q.x; });
  return out;
}

std::string PickField::str() const {
  std::ostringstream s;
  s << "gamma=" << to_string(gamma) << " tau={";
  for (const auto& a : tau) s << "(" << to_string(a.x) << "," << to_string(a.w) << ")";
  s << "}";
  if (imag_drift != 0) s << " drift=i*" << imag_drift;
  return s.str();
}

void validate(const PickField& A) {
  for (std::size_t i = 0; i < A.tau.size(); ++i) {
    if (A.tau[i].w <= 0) fail(ErrorCode::InvalidSpec, "field measure weights must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (A.tau[j].x == A.tau[i].x) fail(ErrorCode::InvalidSpec, "field measure has repeated locations");
  }
  if (A.imag_drift < 0) fail(ErrorCode::InvalidSpec, "imaginary drift must be >= 0");
}

double min_imag_on_grid(const PickField& A, const std::vector<Complex>& grid) {
  double lo = INFINITY;
  for (auto z : grid) lo = std::min(lo, A(z).imag());
  return lo;
}

std::vector<Rational> field_to_cumulants(const PickField& A, int K) {
  if (A.imag_drift != 0) fail(ErrorCode::CauchyHasNoMoments, "a field with imaginary drift has no cumulants");
  std::vector<Rational> tau_m(static_cast<std::size_t>(K) + 1, Rational(0));
  for (const auto& a : A.tau) {
    Rational p(1);
    for (int k = 0; k <= K; ++k) {
      tau_m[static_cast<std::size_t>(k)] += a.w * p;
      p *= a.x;
    }
  }
  std::vector<Rational> r;
  for (int n = 1; n <= K; ++n) {
    if (n == 1)
      r.push_back(A.gamma + tau_m[1]);
    else
      r.push_back(tau_m[static_cast<std::size_t>(n)] + tau_m[static_cast<std::size_t>(n - 2)]);
  }
  return r;
}

namespace {

// Solves M x = b exactly; returns false when M is singular.
bool solve_exact(std::vector<std::vector<Rational>> M, std::vector<Rational> b, std::vector<Rational>& x) {
  std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && M[p][c] == 0) ++p;
    if (p == n) return false;
    std::swap(M[p], M[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (M[r][c] == 0) continue;
      Rational f = M[r][c] / M[c][c];
      for (std::size_t k = c; k < n; ++k) M[r][k] -= f * M[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, Rational(0));
  for (std::size_t i = n; i-- > 0;) {
    Rational acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= M[i][k] * x[k];
    x[i] = acc / M[i][i];
  }
  return true;
}

}  // namespace

PickField cumulants_to_field(const std::vector<Rational>& r) {
  if (r.empty()) fail(ErrorCode::InsufficientOrder, "need at least r_1");
  PickField A;
  std::vector<Rational> c(r.begin() + 1, r.end());  // moments of (1 + x^2) tau
  bool all_zero = std::all_of(c.begin(), c.end(), [](const Rational& v) { return v == 0; });
  if (all_zero) {
    A.gamma = r[0];
    return A;
  }
  if (c[0] <= 0) fail(ErrorCode::InvalidSpec, "r_2 must be positive for a nonzero field measure");
  int n = static_cast<int>(c.size()) / 2;
  std::vector<Rational> coeffs;
  for (; n >= 1; --n) {
    std::vector<std::vector<Rational>> H(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    std::vector<Rational> rhs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) H[i][j] = c[static_cast<std::size_t>(i + j)];
      rhs[i] = -c[static_cast<std::size_t>(i + n)];
    }
    if (solve_exact(H, rhs, coeffs)) break;
  }
  if (n == 0) n = 1, coeffs = {-c[1] / c[0]};
  coeffs.push_back(Rational(1));
  Poly p(coeffs);
  std::vector<Rational> nodes;
  for (const auto& root : real_roots(p)) {
    if (!root.exact) fail(ErrorCode::InvalidSpec, "field measure has irrational atoms");
    nodes.push_back(*root.exact);
  }
  if (static_cast<int>(nodes.size()) != n) fail(ErrorCode::InvalidSpec, "cumulants are not those of a positive field");
  std::vector<std::vector<Rational>> V(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
  std::vector<Rational> rhs(c.begin(), c.begin() + n), w;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) V[i][j] = pow(nodes[static_cast<std::size_t>(j)], static_cast<unsigned>(i));
  solve_exact(V, rhs, w);
  A.gamma = r[0];
  for (int j = 0; j < n; ++j) {
    const Rational& x = nodes[static_cast<std::size_t>(j)];
    Rational tw = w[static_cast<std::size_t>(j)] / (1 + x * x);
    if (tw <= 0) fail(ErrorCode::InvalidSpec, "cumulants are not those of a positive field");
    A.tau.push_back({x, tw});
    A.gamma -= tw * x;
  }
  return A;
}

std::vector<Complex> default_flow_grid() {
  static const double ims[] = {0.5, 1.0, 2.0};
  std::vector<Complex> g;
  for (int k = 0; k < 40; ++k) g.emplace_back(-3.0 + 6.0 * k / 39.0, ims[k % 3]);
  return g;
}

// ---------------------------------------------------------------------------
// Integration

namespace {

struct State {
  Complex H, F;
};

State rhs(const PickField& A1, const PickField& A2, const State& y) { return {A1(y.F), A2(y.F)}; }

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [c, k] : terms) {
    out.H += h * c * k->H;
    out.F += h * c * k->F;
  }
  return out;
}

}  // namespace

FlowPoint integrate_point(const PickField& A1, const PickField& A2, Complex H0, Complex F0, double t,
                          const FlowOptions& opt) {
  State y{H0, F0};
  if (t <= 0) return {y.H, y.F};
  // Dormand-Prince 5(4)
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                   e7 = -1.0 / 40;
  (void)c2, (void)c3, (void)c4, (void)c5;  // autonomous system

  double now = 0, h = std::min(opt.h0, t);
  State k1 = rhs(A1, A2, y);
  for (int step = 0; now < t; ++step) {
    if (step > opt.max_steps) fail(ErrorCode::NonconvergentLadder, "flow integration exceeded the step budget");
    h = std::min(h, t - now);
    State k2 = rhs(A1, A2, axpy(y, h, {{a21, &k1}}));
    State k3 = rhs(A1, A2, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    State k4 = rhs(A1, A2, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    State k5 = rhs(A1, A2, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    State k6 = rhs(A1, A2, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    State y5 = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    State k7 = rhs(A1, A2, y5);
    State err = axpy(State{}, h, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});
    double scale_H = opt.tol * (1.0 + std::max(std::abs(y.H), std::abs(y5.H)));
    double scale_F = opt.tol * (1.0 + std::max(std::abs(y.F), std::abs(y5.F)));
    double e = std::max(std::abs(err.H) / scale_H, std::abs(err.F) / scale_F);
    if (e <= 1.0) {
      now += h;
      y = y5;
      k1 = k7;  // first-same-as-last
      if (y.F.imag() <= 0 || y.H.imag() <= 0)
        fail(ErrorCode::LeftUpperHalfPlane, "trajectory reached the real axis; the field is not of Pick type");
    }
    double factor = e == 0 ? 5.0 : 0.9 * std::pow(e, -0.2);
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < 1e-14 * std::max(1.0, t)) fail(ErrorCode::NonconvergentLadder, "flow step size underflow");
  }
  return {y.H, y.F};
}

FlowState integrate_flow(const PickField& A1, const PickField& A2, double t, const std::vector<Complex>& grid,
                         const FlowOptions& opt) {
  validate(A1);
  validate(A2);
  for (auto z : grid)
    if (z.imag() < 0.5) fail(ErrorCode::InvalidSpec, "flow grid points need Im z >= 0.5");
  FlowState st;
  st.t = t;
  st.grid = grid;
  st.H.resize(grid.size());
  st.F.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    FlowPoint p = integrate_point(A1, A2, grid[i], grid[i], t, opt);
    st.H[i] = p.H;
    st.F[i] = p.F;
  });
  st.min_F_lift = st.min_H_lift = INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    st.min_F_lift = std::min(st.min_F_lift, st.F[i].imag() - grid[i].imag());
    st.min_H_lift = std::min(st.min_H_lift, st.H[i].imag() - grid[i].imag());
  }
  return st;
}

LawResidual verify_semigroup_law(const PickField& A1, const PickField& A2, double s, double t,
                                 const std::vector<Complex>& grid, const FlowOptions& opt) {
  validate(A1);
  validate(A2);
  std::vector<double> fr(grid.size()), hr(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    Complex z = grid[i];
    FlowPoint at_s = integrate_point(A1, A2, z, z, s, opt);
    FlowPoint at_st = integrate_point(A1, A2, z, z, s + t, opt);
    FlowPoint t_after_s = integrate_point(A1, A2, at_s.F, at_s.F, t, opt);
    fr[i] = std::abs(at_st.F - t_after_s.F);
    hr[i] = std::abs(at_st.H - (t_after_s.H - at_s.F + at_s.H));
  });
  LawResidual out;
  out.s = s;
  out.t = t;
  out.F_residual = *std::max_element(fr.begin(), fr.end());
  out.H_residual = *std::max_element(hr.begin(), hr.end());
  return out;
}

FittedMoments fit_flow_moments(const PickField& A1, const PickField& A2, double t, int K) {
  // B(w) = w H(1/w) on |w| = 1/R; conjugate symmetry fills the lower half circle,
  // so the coefficients come from a plain discrete Fourier sum.
  constexpr double R = 6.0;
  constexpr int half = 64, N = 2 * half;
  std::vector<FlowPoint> upper(half);
  parallel_for(half, [&](std::size_t j) {
    double theta = std::numbers::pi * (static_cast<double>(j) + 0.5) / half;
    Complex z = std::polar(R, theta);
    upper[j] = integrate_point(A1, A2, z, z, t);
  });
  auto coefficients = [&](bool first) {
    std::vector<Complex> samples(N);  // at w_j = e^{-i theta_j}/R, theta over the full circle
    for (int j = 0; j < half; ++j) {
      double theta = std::numbers::pi * (j + 0.5) / half;
      Complex z = std::polar(R, theta);
      Complex Hv = first ? upper[static_cast<std::size_t>(j)].H : upper[static_cast<std::size_t>(j)].F;
      samples[static_cast<std::size_t>(j)] = Hv / z;
      samples[static_cast<std::size_t>(N - 1 - j)] = std::conj(Hv / z);
    }
    std::vector<double> b(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) {
      Complex acc = 0;
      for (int j = 0; j < N; ++j) {
        double theta = j < half ? std::numbers::pi * (j + 0.5) / half : -std::numbers::pi * (N - 1 - j + 0.5) / half;
        // w = e^{-i theta}/R, coefficient b_k = mean(B(w) w^{-k})
        acc += samples[static_cast<std::size_t>(j)] * std::polar(std::pow(R, k), k * theta);
      }
      b[static_cast<std::size_t>(k)] = (acc / static_cast<double>(N)).real();
    }
    // M = 1/B
    std::vector<double> m(static_cast<std::size_t>(K) + 1, 0.0);
    m[0] = 1.0 / b[0];
    for (int n = 1; n <= K; ++n) {
      double acc = 0;
      for (int k = 1; k <= n; ++k) acc += b[static_cast<std::size_t>(k)] * m[static_cast<std::size_t>(n - k)];
      m[static_cast<std::size_t>(n)] = -acc / b[0];
    }
    return std::vector<double>(m.begin() + 1, m.end());
  };
  return {coefficients(true), coefficients(false)};
}

// ---------------------------------------------------------------------------
// Infinite divisibility

HankelTest hankel_psd(const std::vector<Rational>& r, int K) {
  if (static_cast<int>(r.size()) < 2 * K)
    fail(ErrorCode::InsufficientOrder, "Hankel test of order " + std::to_string(K) + " needs cumulants to order " +
                                           std::to_string(2 * K));
  auto at = [&](int n) { return r[static_cast<std::size_t>(n - 1)]; };
  auto n = static_cast<std::size_t>(K);
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n));
  Eigen::MatrixXd Mf(K, K);
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k) {
      M[j][k] = at(j + k + 2);
      Mf(j, k) = to_double(M[j][k]);
    }
  HankelTest out;
  out.exact_psd = true;
  // LDL^T without pivoting: a zero pivot in a PSD matrix forces a zero row.
  for (std::size_t k = 0; k < n && out.exact_psd; ++k) {
    Rational d = M[k][k];
    if (d < 0) {
      out.exact_psd = false;
      break;
    }
    if (d == 0) {
      for (std::size_t j = k + 1; j < n; ++j)
        if (M[k][j] != 0) out.exact_psd = false;
      continue;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (M[i][k] == 0) continue;
      Rational f = M[i][k] / d;
      for (std::size_t j = k + 1; j < n; ++j) M[i][j] -= f * M[k][j];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Mf, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.float_psd = out.min_eigenvalue >= -1e-10;
  return out;
}

DivisibilityVerdict is_infinitely_divisible(const std::vector<Rational>& r_pair, const std::vector<Rational>& r_single,
                                            int K) {
  if (K < 1) fail(ErrorCode::InsufficientOrder, "Hankel order must be >= 1");
  DivisibilityVerdict v;
  v.order = K;
  v.pair = hankel_psd(r_pair, K);
  v.single = hankel_psd(r_single, K);
  v.divisible = v.pair.exact_psd && v.single.exact_psd;
  v.tracks_agree = v.pair.agree() && v.single.agree();
  return v;
}

DivisibilityVerdict is_infinitely_divisible(const MomentSeq& mu, const MomentSeq& nu, int K) {
  if (std::min(mu.order(), nu.order()) < 2 * K)
    fail(ErrorCode::InsufficientOrder, "need moments to order " + std::to_string(2 * K));
  CumulantSeq c = cmonotone_cumulants(mu.truncated(2 * K), nu.truncated(2 * K));
  return is_infinitely_divisible(c.r, c.companion, K);
}

MomentPair nth_root(const CumulantSeq& pc, int n) {
  if (n < 1) fail(ErrorCode::InvalidSpec, "root index must be >= 1");
  if (pc.companion.size() != pc.r.size()) fail(ErrorCode::InvalidSpec, "pair cumulants need the companion sequence");
  std::vector<Rational> rp = pc.r, rs = pc.companion;
  for (auto& x : rp) x /= n;
  for (auto& x : rs) x /= n;
  return {moments_from_cmonotone(rp, rs), moments_from_monotone(rs)};
}

MomentPair nth_root(const MomentPair& p, int n) { return nth_root(cmonotone_cumulants(p.first, p.second), n); }

}  // namespace cmono
