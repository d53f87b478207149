#include "cmono/transforms.hpp"

#include "cmono/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cmono {

// ---------------------------------------------------------------------------
// RationalMap

RationalMap::RationalMap(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

void RationalMap::reduce() {
  if (den_.is_zero()) fail(ErrorCode::InvalidSpec, "rational map with zero denominator");
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  Poly g = gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = divmod(num_, g).quotient;
    den_ = divmod(den_, g).quotient;
  }
  Rational lead = den_.leading();
  if (lead != 1) {
    num_ *= Rational(1) / lead;
    den_ *= Rational(1) / lead;
  }
}

Rational RationalMap::operator()(const Rational& z) const {
  Rational d = den_(z);
  if (d == 0) fail(ErrorCode::InvalidSpec, "evaluating a rational map at a pole");
  return num_(z) / d;
}

Complex RationalMap::operator()(Complex z) const { return num_(z) / den_(z); }

RationalMap& RationalMap::operator+=(const RationalMap& o) {
  *this = RationalMap(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  return *this;
}

RationalMap& RationalMap::operator-=(const RationalMap& o) {
  *this = RationalMap(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  return *this;
}

RationalMap& RationalMap::operator*=(const RationalMap& o) {
  *this = RationalMap(num_ * o.num_, den_ * o.den_);
  return *this;
}

RationalMap& RationalMap::operator*=(const Rational& s) {
  *this = RationalMap(num_ * s, den_);
  return *this;
}

Series<Rational> RationalMap::b_series(int K) const {
  int n = num_.degree();
  if (n != den_.degree() + 1) fail(ErrorCode::NotAProbabilityH, "H must grow like z at infinity");
  // H/z = N(z)/(z D(z)); multiply through by w^n
  Series<Rational> Nt(K), Dt(K);
  for (int i = 0; i <= n; ++i)
    if (n - i <= K) Nt[n - i] = num_.coeff(i);
  for (int j = 0; j <= n - 1; ++j)
    if (n - 1 - j <= K) Dt[n - 1 - j] = den_.coeff(j);
  return Nt * Dt.inverse();
}

// In reduced form H is odd iff num and den have opposite, pure parities.
bool RationalMap::is_odd() const {
  auto parity = [](const Poly& p) {
    int par = -1;
    for (int i = 0; i <= p.degree(); ++i) {
      if (p.coeff(i) == 0) continue;
      if (par == -1) par = i % 2;
      else if (par != i % 2) return -2;
    }
    return par;
  };
  if (num_.is_zero()) return true;
  int pn = parity(num_), pd = parity(den_);
  return pn >= 0 && pd >= 0 && pn != pd;
}

std::string RationalMap::str() const {
  if (den_ == Poly(1)) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

RationalMap compose(const RationalMap& f, const RationalMap& g, int degree_cap) {
  int d = std::max(f.num().degree(), f.den().degree());
  int predicted = std::max(d, 0) * std::max(g.degree(), 1);
  if (predicted > degree_cap)
    fail(ErrorCode::DegreeOverflow, "composition degree " + std::to_string(predicted) + " exceeds cap " +
                                        std::to_string(degree_cap) + "; use the moment-series track");
  // f(A/B) = sum p_i A^i B^(d-i) / sum q_i A^i B^(d-i)
  const Poly& A = g.num();
  const Poly& B = g.den();
  std::vector<Poly> Ap{Poly(1)}, Bp{Poly(1)};
  for (int i = 1; i <= d; ++i) {
    Ap.push_back(Ap.back() * A);
    Bp.push_back(Bp.back() * B);
  }
  auto homogenize = [&](const Poly& p) {
    Poly acc;
    for (int i = 0; i <= p.degree(); ++i) {
      if (p.coeff(i) == 0) continue;
      acc += Ap[static_cast<std::size_t>(i)] * Bp[static_cast<std::size_t>(d - i)] * p.coeff(i);
    }
    return acc;
  };
  if (d <= 0) return f;
  return RationalMap(homogenize(f.num()), homogenize(f.den()));
}

namespace {

Poly linear(const Rational& root) { return Poly(std::vector<Rational>{-root, Rational(1)}); }

}  // namespace

RationalMap g_of_atomic(const AtomicMeasure& mu) {
  Poly prod(1), sum;
  const auto& atoms = mu.atoms();
  for (const auto& a : atoms) prod *= linear(a.x);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    Poly term(atoms[i].w);
    for (std::size_t j = 0; j < atoms.size(); ++j)
      if (j != i) term *= linear(atoms[j].x);
    sum += term;
  }
  return RationalMap(sum, prod);
}

RationalMap h_of_atomic(const AtomicMeasure& mu) {
  RationalMap G = g_of_atomic(mu);
  return RationalMap(G.den(), G.num());
}

MomentSeq moments_of_h(const RationalMap& H, int K) { return MomentSeq::from_h_series(H.b_series(K)); }

AtomicMeasure RecoveredMeasure::to_atomic() const {
  if (!exact) fail(ErrorCode::InvalidSpec, "recovered measure has irrational atoms");
  std::vector<Atom> out;
  for (const auto& a : atoms) out.push_back({*a.exact_x, *a.exact_w});
  return AtomicMeasure(std::move(out));
}

HighFloat RecoveredMeasure::total_mass() const {
  HighFloat s = 0;
  for (const auto& a : atoms) s += a.w;
  return s;
}

namespace {

// Residues -N(y)/D'(y) of a reduced H = N/D at the real roots y of D.
std::vector<WeightedPoint> pole_masses(const RationalMap& H) {
  const Poly& N = H.num();
  const Poly& D = H.den();
  std::vector<WeightedPoint> out;
  if (D.degree() <= 0) return out;
  if (count_distinct_real_roots(D) != D.degree() || gcd(D, D.derivative()).degree() > 0)
    fail(ErrorCode::NotAProbabilityH, "H has non-real or repeated poles");
  Poly dD = D.derivative();
  for (const auto& r : real_roots(D)) {
    WeightedPoint p;
    p.x = r.value;
    if (r.exact) {
      p.exact_x = r.exact;
      p.exact_w = -N(*r.exact) / dD(*r.exact);
      p.w = p.exact_w->convert_to<HighFloat>();
    } else {
      p.w = -N.eval_high(r.value) / dD.eval_high(r.value);
    }
    if (p.w <= 0) fail(ErrorCode::NotAProbabilityH, "H has a pole with non-positive mass");
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

RecoveredMeasure measure_from_h(const RationalMap& H, int bits) {
  const Poly& N = H.num();
  const Poly& D = H.den();
  if (N.degree() != D.degree() + 1 || N.leading() != 1)
    fail(ErrorCode::NotAProbabilityH, "H is not of the form z + O(1)");
  if (count_distinct_real_roots(N) != N.degree() || gcd(N, N.derivative()).degree() > 0)
    fail(ErrorCode::NotAProbabilityH, "H has non-real or repeated zeros");
  Poly dN = N.derivative();
  RecoveredMeasure out;
  out.exact = true;
  for (const auto& r : real_roots(N, bits)) {
    WeightedPoint p;
    p.x = r.value;
    if (r.exact) {
      p.exact_x = r.exact;
      p.exact_w = D(*r.exact) / dN(*r.exact);
      p.w = p.exact_w->convert_to<HighFloat>();
      if (*p.exact_w <= 0) fail(ErrorCode::NotAProbabilityH, "negative residue at " + to_string(*r.exact));
    } else {
      out.exact = false;
      p.w = D.eval_high(r.value) / dN.eval_high(r.value);
      if (p.w <= 0) fail(ErrorCode::NotAProbabilityH, "negative residue");
    }
    out.atoms.push_back(std::move(p));
  }
  HighFloat err = abs(out.total_mass() - 1);
  if (err > HighFloat(1e-12)) fail(ErrorCode::NotAProbabilityH, "residues do not sum to 1");
  return out;
}

// Jacobi continued fraction H = z - a0 - b1/(z - a1 - b2/(...)): H comes from a
// finitely atomic probability measure iff every step is defined with b_k > 0.
bool is_atomic_h(const RationalMap& H) {
  Poly N = H.num(), D = H.den();
  if (N.degree() != D.degree() + 1 || N.leading() != 1) return false;
  while (D.degree() > 0) {
    Poly R = divmod(N, D).remainder;
    if (R.degree() != D.degree() - 1 || R.leading() >= 0) return false;
    Rational b = -R.leading();
    N = std::move(D);
    D = R * (Rational(-1) / b);
  }
  return true;
}

Complex NevanlinnaForm::operator()(Complex z) const {
  Complex acc = z + b.convert_to<double>();
  for (const auto& p : eta) {
    double x = p.x.convert_to<double>();
    acc += p.w.convert_to<double>() * (1.0 + x * z) / (x - z);
  }
  return acc;
}

Complex FiniteVarianceForm::operator()(Complex z) const {
  Complex acc = z + to_double(a);
  for (const auto& p : rho) acc += p.w.convert_to<double>() / (p.x.convert_to<double>() - z);
  return acc;
}

FiniteVarianceForm finite_variance_of(const RationalMap& H) {
  // a rational H of an atomic law is z + a + O(1/z); anything else has no finite variance
  if (H.num().degree() != H.den().degree() + 1 || H.num().leading() != 1)
    fail(ErrorCode::NotFiniteVariance, "H is not of the form z + a + O(1/z)");
  auto B = H.b_series(2);
  FiniteVarianceForm f;
  f.a = B[1];
  f.rho_mass = -B[2];
  f.rho = pole_masses(H);
  return f;
}

NevanlinnaForm nevanlinna_of(const RationalMap& H) {
  FiniteVarianceForm fv = finite_variance_of(H);
  NevanlinnaForm nf;
  // 1/(x - z) = ((1 + xz)/(x - z) + x) / (1 + x^2)
  HighFloat b = fv.a.convert_to<HighFloat>();
  Rational exact_b = fv.a;
  bool exact = true;
  for (const auto& p : fv.rho) {
    WeightedPoint e;
    e.x = p.x;
    e.w = p.w / (1 + p.x * p.x);
    b += p.x * p.w / (1 + p.x * p.x);
    if (p.exact_x && p.exact_w) {
      const Rational& x = *p.exact_x;
      e.exact_x = x;
      e.exact_w = *p.exact_w / (1 + x * x);
      exact_b += x * *p.exact_w / (1 + x * x);
    } else {
      exact = false;
    }
    nf.eta.push_back(std::move(e));
  }
  nf.b = b;
  if (exact) nf.exact_b = exact_b;
  return nf;
}

// ---------------------------------------------------------------------------
// Branches and closed-form maps

namespace {

constexpr double kCutGuard = 1e-14;
constexpr double kBoundaryHeight = 1e-10;

double cut_distance_negative_axis(Complex w) { return w.real() <= 0 ? std::abs(w.imag()) : std::abs(w); }
double cut_distance_positive_axis(Complex w) { return w.real() >= 0 ? std::abs(w.imag()) : std::abs(w); }

}  // namespace

Complex log_branch1(Complex w) {
  if (cut_distance_negative_axis(w) <= kCutGuard) fail(ErrorCode::BranchCutHit, "log1 argument on (-inf, 0]");
  return std::log(w);
}

Complex log_branch2(Complex w) {
  if (cut_distance_positive_axis(w) <= kCutGuard) fail(ErrorCode::BranchCutHit, "log2 argument on [0, inf)");
  double arg = std::arg(w);
  if (arg < 0) arg += 2 * std::numbers::pi;
  return {std::log(std::abs(w)), arg};
}

Complex sqrt_branch(Complex w) { return std::exp(0.5 * log_branch2(w)); }

struct AnalyticMap::Node {
  enum class Op { Var, Const, Add, Sub, Mul, Div, Neg, Sqrt, Log1, Log2 } op;
  Complex value{};
  std::shared_ptr<const Node> a, b;

  Complex eval(Complex z) const {
    switch (op) {
      case Op::Var: return z;
      case Op::Const: return value;
      case Op::Add: return a->eval(z) + b->eval(z);
      case Op::Sub: return a->eval(z) - b->eval(z);
      case Op::Mul: return a->eval(z) * b->eval(z);
      case Op::Div: return a->eval(z) / b->eval(z);
      case Op::Neg: return -a->eval(z);
      case Op::Sqrt: return sqrt_branch(a->eval(z));
      case Op::Log1: return log_branch1(a->eval(z));
      case Op::Log2: return log_branch2(a->eval(z));
    }
    return {};
  }

  std::string str() const {
    std::ostringstream os;
    switch (op) {
      case Op::Var: return "z";
      case Op::Const:
        if (value.imag() == 0) os << value.real();
        else os << "(" << value.real() << (value.imag() < 0 ? "" : "+") << value.imag() << "i)";
        return os.str();
      case Op::Add: return "(" + a->str() + " + " + b->str() + ")";
      case Op::Sub: return "(" + a->str() + " - " + b->str() + ")";
      case Op::Mul: return a->str() + "*" + b->str();
      case Op::Div: return a->str() + "/" + b->str();
      case Op::Neg: return "-" + a->str();
      case Op::Sqrt: return "sqrt(" + a->str() + ")";
      case Op::Log1: return "log1(" + a->str() + ")";
      case Op::Log2: return "log2(" + a->str() + ")";
    }
    return "?";
  }
};

namespace {

using NodeOp = AnalyticMap::Node;

std::shared_ptr<const NodeOp> make_node(NodeOp::Op op, std::shared_ptr<const NodeOp> a = nullptr,
                                        std::shared_ptr<const NodeOp> b = nullptr) {
  auto n = std::make_shared<NodeOp>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

}  // namespace

AnalyticMap::AnalyticMap() : node_(make_node(Node::Op::Var)) {}

AnalyticMap::AnalyticMap(Complex c) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Const;
  n->value = c;
  node_ = n;
}

AnalyticMap operator+(const AnalyticMap& a, const AnalyticMap& b) {
  return AnalyticMap(make_node(NodeOp::Op::Add, a.node_, b.node_));
}
AnalyticMap operator-(const AnalyticMap& a, const AnalyticMap& b) {
  return AnalyticMap(make_node(NodeOp::Op::Sub, a.node_, b.node_));
}
AnalyticMap operator*(const AnalyticMap& a, const AnalyticMap& b) {
  return AnalyticMap(make_node(NodeOp::Op::Mul, a.node_, b.node_));
}
AnalyticMap operator/(const AnalyticMap& a, const AnalyticMap& b) {
  return AnalyticMap(make_node(NodeOp::Op::Div, a.node_, b.node_));
}
AnalyticMap operator-(const AnalyticMap& a) { return AnalyticMap(make_node(NodeOp::Op::Neg, a.node_)); }
AnalyticMap sqrt2(const AnalyticMap& a) { return AnalyticMap(make_node(NodeOp::Op::Sqrt, a.node_)); }
AnalyticMap log1(const AnalyticMap& a) { return AnalyticMap(make_node(NodeOp::Op::Log1, a.node_)); }
AnalyticMap log2(const AnalyticMap& a) { return AnalyticMap(make_node(NodeOp::Op::Log2, a.node_)); }

Complex AnalyticMap::operator()(Complex z) const { return node_->eval(z); }
Complex AnalyticMap::boundary(double x) const { return node_->eval({x, kBoundaryHeight}); }
std::string AnalyticMap::str() const { return node_->str(); }

// ---------------------------------------------------------------------------
// Stieltjes inversion and atoms

DensityEstimate stieltjes_estimate(const ComplexFn& G, double x, const LadderOptions& opt) {
  const int L = opt.levels;
  std::vector<std::vector<double>> T(static_cast<std::size_t>(L));
  double eps = opt.eps0;
  for (int k = 0; k < L; ++k, eps *= 0.5) {
    auto& row = T[static_cast<std::size_t>(k)];
    row.push_back(-G({x, eps}).imag() / std::numbers::pi);
    double factor = 1.0;
    for (int j = 1; j <= k; ++j) {
      factor *= 2.0;
      const auto& prev = T[static_cast<std::size_t>(k - 1)];
      row.push_back(row[static_cast<std::size_t>(j - 1)] +
                    (row[static_cast<std::size_t>(j - 1)] - prev[static_cast<std::size_t>(j - 1)]) / (factor - 1.0));
    }
  }
  const auto& last = T.back();
  DensityEstimate est;
  est.value = last.back();
  est.spread = L >= 2 ? std::abs(last.back() - last[last.size() - 2]) : 0.0;
  est.converged = est.spread <= opt.tol * std::max(1.0, std::abs(est.value));
  return est;
}

double stieltjes_density(const ComplexFn& G, double x, const LadderOptions& opt) {
  auto est = stieltjes_estimate(G, x, opt);
  if (!est.converged) {
    std::ostringstream os;
    os << "Richardson ladder at x=" << x << " spread " << est.spread;
    fail(ErrorCode::NonconvergentLadder, os.str());
  }
  return est.value;
}

LocatedAtom locate_atom(const ComplexFn& H_boundary, const Interval& iv) {
  auto h = [&](double x) { return H_boundary({x, 0.0}).real(); };
  auto nudge = [](double v) { return 1e-7 * std::max(1.0, std::abs(v)); };

  double a, b;
  if (std::isfinite(iv.lo)) {
    a = iv.lo + nudge(iv.lo);
  } else {
    double step = 1.0;
    a = (std::isfinite(iv.hi) ? iv.hi : 0.0) - step;
    while (h(a) >= 0 && step < 1e8) {
      step *= 2;
      a = (std::isfinite(iv.hi) ? iv.hi : 0.0) - step;
    }
  }
  if (std::isfinite(iv.hi)) {
    b = iv.hi - nudge(iv.hi);
  } else {
    double step = 1.0;
    b = std::max(a, 0.0) + step;
    while (h(b) <= 0 && step < 1e8) {
      step *= 2;
      b = std::max(a, 0.0) + step;
    }
  }
  if (!(a < b)) fail(ErrorCode::NoSignChange, "empty interval");

  constexpr int kSamples = 64;
  std::vector<double> xs(kSamples + 1), hs(kSamples + 1);
  for (int i = 0; i <= kSamples; ++i) {
    xs[static_cast<std::size_t>(i)] = a + (b - a) * i / kSamples;
    hs[static_cast<std::size_t>(i)] = h(xs[static_cast<std::size_t>(i)]);
    if (i > 0 && hs[static_cast<std::size_t>(i)] < hs[static_cast<std::size_t>(i - 1)] - 1e-9)
      fail(ErrorCode::InvalidSpec, "H is not increasing on the interval");
  }
  int bracket = -1;
  for (int i = 0; i < kSamples; ++i)
    if (hs[static_cast<std::size_t>(i)] <= 0 && hs[static_cast<std::size_t>(i + 1)] > 0) {
      bracket = i;
      break;
    }
  if (bracket < 0) fail(ErrorCode::NoSignChange, "H has no zero on the interval");
  double lo = xs[static_cast<std::size_t>(bracket)], hi = xs[static_cast<std::size_t>(bracket + 1)];
  while (hi - lo > 1e-12 * std::max(1.0, std::abs(lo))) {
    double mid = 0.5 * (lo + hi);
    if (h(mid) <= 0) lo = mid;
    else hi = mid;
  }
  double x0 = 0.5 * (lo + hi);
  constexpr double kStep = 1e-6;
  double slope = (h(x0 + kStep) - h(x0 - kStep)) / (2 * kStep);
  return {x0, 1.0 / slope};
}

std::vector<LocatedAtom> locate_atoms(const AnalyticMap& H, const std::vector<Interval>& intervals) {
  std::vector<LocatedAtom> out;
  auto boundary = [&](Complex z) { return H.boundary(z.real()); };
  for (const auto& iv : intervals) out.push_back(locate_atom(boundary, iv));
  return out;
}

}  // namespace cmono
