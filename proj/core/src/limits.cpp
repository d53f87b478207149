#include "cmono/limits.hpp"

#include "cmono/cumulants.hpp"
#include "cmono/error.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace cmono {

namespace {

using K_ = LimitLaw::Kind;
constexpr double kInf = std::numeric_limits<double>::infinity();

void need(const LimitLaw& law, std::size_t n) {
  if (law.params.size() != n) fail(ErrorCode::InvalidSpec, "limit law " + law.str() + " needs " + std::to_string(n) + " parameters");
}

double d(const Rational& q) { return to_double(q); }

Series<Rational> one(int K) { return Series<Rational>::constant(Rational(1), K); }
Series<Rational> wser(int K) { return Series<Rational>::identity(K); }

// sqrt(1 - 2 v w^2)
Series<Rational> root_b(const Rational& v, int K) {
  Series<Rational> s = one(K);
  if (K >= 2) s[2] = Rational(-2) * v;
  return s.sqrt_unit();
}

// log(1 + a w)
Series<Rational> log_linear(const Rational& a, int K) {
  Series<Rational> s = one(K);
  if (K >= 1) s[1] = a;
  return s.log_unit();
}

// 1/(1 - w) - 1 = w + w^2 + ...
Series<Rational> geometric_tail(int K) {
  Series<Rational> s(K);
  for (int i = 1; i <= K; ++i) s[i] = Rational(1);
  return s;
}

Series<Rational> kesten_b(const Rational& alpha2, const Rational& beta2, int K) {
  Rational r = alpha2 / beta2;
  return one(K) * (1 - r) + root_b(beta2, K) * r;
}

// B of p^{(u,a)}_lambda: 1 - lambda w - (w/c) log(1 + c lambda w/(1 - w)), c = a - u
Series<Rational> deformed_poisson_b(const Rational& u, const Rational& a, const Rational& lambda, int K) {
  Rational c = a - u;
  Series<Rational> B = one(K + 1);
  B[1] -= lambda;
  if (c == 0) {
    // -lambda w^2 / (1 - w)
    Series<Rational> tail = geometric_tail(K + 1).times_w();
    B -= tail * lambda;
  } else {
    Series<Rational> arg = one(K + 1) + geometric_tail(K + 1) * (c * lambda);
    B -= arg.log_unit().times_w() * (Rational(1) / c);
  }
  return B.truncated(K);
}

Series<Rational> cmonotone_poisson_b(const Rational& lambda, const Rational& rho, int K) {
  if (rho == 0) fail(ErrorCode::InvalidSpec, "rho must be nonzero");
  MomentSeq p = moments_from_monotone(std::vector<Rational>(static_cast<std::size_t>(K), rho));
  Rational s = lambda / rho;
  return one(K) * (1 - s) + p.h_series() * s;
}

// (1 - 1/t) + (1/t) S + (w/t) log((S - w)/(1 - w)) - lambda w, S = sqrt(1 - 2 lambda t w^2)
Series<Rational> xi_poisson_b(const Rational& t, const Rational& lambda, int K) {
  int K1 = K + 1;
  Series<Rational> S = root_b(lambda * t, K1);
  Series<Rational> inv1mw = one(K1) + geometric_tail(K1);
  Series<Rational> ratio = (S - wser(K1)) * inv1mw;
  Rational it = Rational(1) / t;
  Series<Rational> B = one(K1) * (1 - it) + S * it + ratio.log_unit().times_w() * it;
  B[1] -= lambda;
  return B.truncated(K);
}

Rational param(const LimitLaw& law, std::size_t i) { return law.params.at(i); }

void validate_law(const LimitLaw& law) {
  switch (law.kind) {
    case K_::KestenCLT:
      need(law, 2);
      if (param(law, 0) <= 0 || param(law, 1) <= 0) fail(ErrorCode::InvalidSpec, "Kesten parameters must be positive");
      break;
    case K_::CMonotonePoisson:
      need(law, 2);
      if (param(law, 0) < 0 || param(law, 1) <= 0) fail(ErrorCode::InvalidSpec, "need lambda >= 0 and rho > 0");
      break;
    case K_::DeformedCLT_t:
    case K_::XiArcsineCLT:
      need(law, 1);
      if (param(law, 0) <= 0) fail(ErrorCode::InvalidSpec, "t must be positive");
      break;
    case K_::DeformedCLT_0a:
      need(law, 1);
      break;
    case K_::DeformedPoisson_ua:
      need(law, 3);
      if (param(law, 2) <= 0) fail(ErrorCode::InvalidSpec, "lambda must be positive");
      break;
    case K_::XiArcsinePoisson:
      need(law, 2);
      if (param(law, 0) <= 0 || param(law, 1) <= 0) fail(ErrorCode::InvalidSpec, "t and lambda must be positive");
      break;
  }
}

bool is_square(int N, int& root) {
  int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(N))));
  for (int c = std::max(0, r - 1); c <= r + 1; ++c)
    if (c * c == N) {
      root = c;
      return true;
    }
  return false;
}

bool odd_moments_vanish(const MomentSeq& m) {
  for (int n = 1; n <= m.order(); n += 2)
    if (m(n) != 0) return false;
  return true;
}

// m_n N^{-n/2}, exact when the result is rational.
IterateResult dilate_by_root(const MomentSeq& m, int N) {
  IterateResult out;
  out.N = N;
  int root = 0;
  bool square = is_square(N, root);
  std::vector<Rational> exact;
  bool rational = true;
  for (int n = 1; n <= m.order(); ++n) {
    Rational v = m(n);
    if (square) {
      v /= pow(Rational(root), static_cast<unsigned>(n));
    } else if (n % 2 == 0) {
      v /= pow(Rational(N), static_cast<unsigned>(n / 2));
    } else if (v != 0) {
      rational = false;
    }
    exact.push_back(v);
    out.moments.push_back(rational || n % 2 == 0 || square ? d(v) : d(m(n)) * std::pow(static_cast<double>(N), -0.5 * n));
  }
  if (rational) out.exact = MomentSeq(exact);
  return out;
}

IterateResult from_exact(const MomentSeq& m, int N) {
  IterateResult out;
  out.N = N;
  for (const auto& v : m.values()) out.moments.push_back(d(v));
  out.exact = m;
  return out;
}

bool commutes_with_dilation(const Transform& T) {
  if (std::holds_alternative<xform::XiGeneral>(T)) return false;
  if (const auto* v = std::get_if<xform::Vtua>(&T)) return v->a == 0;
  return true;
}

void require_normalized(const MomentSeq& mu) {
  if (mu.order() < 2) fail(ErrorCode::InsufficientOrder, "the CLT needs at least two moments");
  if (mu(1) != 0 || mu(2) != 1) fail(ErrorCode::NotNormalized, "the CLT needs m_1 = 0 and m_2 = 1");
}

}  // namespace

// ---------------------------------------------------------------------------

LimitLaw LimitLaw::kesten(const Rational& alpha2, const Rational& beta2) { return {Kind::KestenCLT, {alpha2, beta2}}; }
LimitLaw LimitLaw::cmonotone_poisson(const Rational& lambda, const Rational& rho) {
  return {Kind::CMonotonePoisson, {lambda, rho}};
}
LimitLaw LimitLaw::deformed_clt_t(const Rational& t) { return {Kind::DeformedCLT_t, {t}}; }
LimitLaw LimitLaw::deformed_clt_0a(const Rational& a) { return {Kind::DeformedCLT_0a, {a}}; }
LimitLaw LimitLaw::deformed_poisson(const Rational& u, const Rational& a, const Rational& lambda) {
  return {Kind::DeformedPoisson_ua, {u, a, lambda}};
}
LimitLaw LimitLaw::xi_arcsine_clt(const Rational& t) { return {Kind::XiArcsineCLT, {t}}; }
LimitLaw LimitLaw::xi_arcsine_poisson(const Rational& t, const Rational& lambda) {
  return {Kind::XiArcsinePoisson, {t, lambda}};
}

namespace {
struct KindName {
  LimitLaw::Kind kind;
  const char* name;
};
constexpr KindName kKindNames[] = {
    {K_::KestenCLT, "kesten"},      {K_::CMonotonePoisson, "cmpoisson"},     {K_::DeformedCLT_t, "clt_t"},
    {K_::DeformedCLT_0a, "clt_0a"}, {K_::DeformedPoisson_ua, "poisson_ua"}, {K_::XiArcsineCLT, "xi_clt"},
    {K_::XiArcsinePoisson, "xi_poisson"},
};
}  // namespace

LimitLaw LimitLaw::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  LimitLaw law;
  bool found = false;
  for (const auto& kn : kKindNames)
    if (head == kn.name) {
      law.kind = kn.kind;
      found = true;
    }
  if (!found) fail(ErrorCode::InvalidSpec, "unknown limit law '" + head + "'");
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) law.params.push_back(parse_rational(item));
  }
  validate_law(law);
  return law;
}

std::string LimitLaw::str() const {
  std::string out;
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) out = kn.name;
  for (std::size_t i = 0; i < params.size(); ++i) out += (i == 0 ? ":" : ",") + to_string(params[i]);
  return out;
}

MomentSeq limit_law_moments(const LimitLaw& law, int K) {
  validate_law(law);
  const auto& p = law.params;
  Series<Rational> B;
  switch (law.kind) {
    case K_::KestenCLT:
      B = kesten_b(p[0], p[1], K);
      break;
    case K_::DeformedCLT_t:
    case K_::XiArcsineCLT:
      B = kesten_b(Rational(1), p[0], K);
      break;
    case K_::CMonotonePoisson:
      B = cmonotone_poisson_b(p[0], p[1], K);
      break;
    case K_::DeformedCLT_0a:
      if (p[0] == 0) {
        B = one(K);
        if (K >= 2) B[2] = Rational(-1);
      } else {
        // 1 - (w/a) log(1 + a w)
        B = one(K) - log_linear(p[0], K + 1).times_w().truncated(K) * (Rational(1) / p[0]);
      }
      break;
    case K_::DeformedPoisson_ua:
      B = deformed_poisson_b(p[0], p[1], p[2], K);
      break;
    case K_::XiArcsinePoisson:
      B = xi_poisson_b(p[0], p[1], K);
      break;
  }
  return MomentSeq::from_h_series(B);
}

AnalyticMap limit_law_h(const LimitLaw& law) {
  validate_law(law);
  const AnalyticMap z = AnalyticMap::z();
  std::vector<double> p;
  for (const auto& q : law.params) p.push_back(d(q));
  auto kesten = [&](double alpha2, double beta2) {
    double r = alpha2 / beta2;
    return (1 - r) * z + r * sqrt2(z * z - 2 * beta2);
  };
  switch (law.kind) {
    case K_::KestenCLT:
      return kesten(p[0], p[1]);
    case K_::DeformedCLT_t:
    case K_::XiArcsineCLT:
      return kesten(1, p[0]);
    case K_::CMonotonePoisson:
      if (p[0] == 0) return z;
      break;
    case K_::DeformedCLT_0a:
      if (p[0] == 0) return z - 1 / z;
      return z - log1(1 + p[0] / z) / p[0];
    case K_::DeformedPoisson_ua: {
      double c = p[1] - p[0], lambda = p[2];
      if (law.params[1] == law.params[0]) return z - lambda - lambda / (z - 1);
      return z - lambda - log1(1 + c * lambda / (z - 1)) / c;
    }
    case K_::XiArcsinePoisson: {
      double t = p[0], lambda = p[1];
      AnalyticMap S = sqrt2(z * z - 2 * lambda * t);
      return (1 - 1 / t) * z + S / t + log1((S - 1) / (z - 1)) / t - lambda;
    }
  }
  fail(ErrorCode::InvalidSpec, "no closed form for " + law.str() + "; use the moment track");
}

std::optional<double> stated_density(const LimitLaw& law, double x) {
  validate_law(law);
  std::vector<double> p;
  for (const auto& q : law.params) p.push_back(d(q));
  auto kesten = [&](double alpha2, double beta2) -> double {
    double s = 2 * beta2 - x * x;
    if (s <= 0) return 0.0;
    return alpha2 * std::sqrt(s) / (std::numbers::pi * (2 * alpha2 * alpha2 - (2 * alpha2 - beta2) * x * x));
  };
  switch (law.kind) {
    case K_::KestenCLT:
      return kesten(p[0], p[1]);
    case K_::DeformedCLT_t:
    case K_::XiArcsineCLT:
      return kesten(1, p[0]);
    case K_::DeformedCLT_0a: {
      double a = p[0];
      if (a == 0) return std::nullopt;
      double lo = std::min(-a, 0.0), hi = std::max(-a, 0.0);
      if (x <= lo || x >= hi) return 0.0;
      double L = std::log(std::abs(1 + a / x));
      double s = L - a * x;
      return std::abs(a) / (s * s + std::numbers::pi * std::numbers::pi);
    }
    case K_::DeformedPoisson_ua: {
      double c = p[1] - p[0], lambda = p[2];
      if (c == 0) return std::nullopt;
      double lo = std::min(1.0, 1 - c * lambda), hi = std::max(1.0, 1 - c * lambda);
      if (x <= lo || x >= hi) return 0.0;
      double L = std::log(std::abs(1 + c * lambda / (x - 1)));
      double s = L - c * (x - lambda);
      return std::abs(c) / (s * s + std::numbers::pi * std::numbers::pi);
    }
    default:
      return std::nullopt;
  }
}

LawGeometry limit_law_geometry(const LimitLaw& law) {
  validate_law(law);
  std::vector<double> p;
  for (const auto& q : law.params) p.push_back(d(q));
  LawGeometry g;
  auto symmetric = [&](double edge) {
    g.ac_support.push_back({-edge, edge});
    g.atom_candidates.push_back({-kInf, -edge});
    g.atom_candidates.push_back({edge, kInf});
  };
  switch (law.kind) {
    case K_::KestenCLT:
      symmetric(std::sqrt(2 * p[1]));
      break;
    case K_::DeformedCLT_t:
    case K_::XiArcsineCLT:
      symmetric(std::sqrt(2 * p[0]));
      break;
    case K_::CMonotonePoisson:
      fail(ErrorCode::InvalidSpec, "no closed form for " + law.str());
    case K_::DeformedCLT_0a: {
      double a = p[0];
      if (a == 0) {
        g.atom_candidates = {{-kInf, 0}, {0, kInf}};
        break;
      }
      double lo = std::min(-a, 0.0), hi = std::max(-a, 0.0);
      g.ac_support.push_back({lo, hi});
      g.atom_candidates = {{-kInf, lo}, {hi, kInf}};
      break;
    }
    case K_::DeformedPoisson_ua: {
      double c = p[1] - p[0], lambda = p[2];
      if (c == 0) {
        g.atom_candidates = {{-kInf, 1}, {1, kInf}};
        break;
      }
      double lo = std::min(1.0, 1 - c * lambda), hi = std::max(1.0, 1 - c * lambda);
      g.ac_support.push_back({lo, hi});
      g.atom_candidates = {{-kInf, lo}, {hi, kInf}};
      break;
    }
    case K_::XiArcsinePoisson: {
      double s = std::sqrt(2 * p[0] * p[1]);
      double top = std::sqrt(s * s + 1);
      if (s < 1) {
        g.ac_support = {{-s, s}, {1, top}};
        g.atom_candidates = {{-kInf, -s}, {s, 1}, {top, kInf}};
      } else {
        g.ac_support = {{-s, top}};
        g.atom_candidates = {{-kInf, -s}, {top, kInf}};
      }
      break;
    }
  }
  return g;
}

DensityReport limit_law_density(const LimitLaw& law, const std::vector<double>& grid) {
  AnalyticMap H = limit_law_h(law);
  LawGeometry geo = limit_law_geometry(law);
  DensityReport rep;

  ComplexFn G = [&H](Complex z) { return 1.0 / H(z); };
  for (double x : grid) {
    DensityPoint pt;
    pt.x = x;
    try {
      DensityEstimate e = stieltjes_estimate(G, x);
      pt.density = e.value;
      pt.spread = e.spread;
      pt.converged = e.converged;
    } catch (const Error&) {
      pt.converged = false;
    }
    rep.table.push_back(pt);
  }

  ComplexFn boundary = [&H](Complex z) { return H.boundary(z.real()); };
  for (const auto& iv : geo.atom_candidates) {
    try {
      LocatedAtom a = locate_atom(boundary, iv);
      rep.atoms.push_back(a);
      rep.atom_mass += a.w;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSignChange) throw;
    }
  }

  boost::math::quadrature::tanh_sinh<double> integrator;
  auto dens = [&H](double x) {
    try {
      return std::max(0.0, -(1.0 / H.boundary(x)).imag() / std::numbers::pi);
    } catch (const Error&) {
      return 0.0;
    }
  };
  for (const auto& iv : geo.ac_support) rep.ac_mass += integrator.integrate(dens, iv.lo, iv.hi, 1e-9);
  return rep;
}

// ---------------------------------------------------------------------------

IterateResult clt_iterate(const MomentSeq& mu, const Transform& T, int N, int K) {
  if (N < 1) fail(ErrorCode::InvalidSpec, "N must be positive");
  MomentSeq m = mu.truncated(std::min(K, mu.order()));
  if (m.order() < K) fail(ErrorCode::InsufficientOrder, "the input has fewer than K moments");
  require_normalized(m);
  if (commutes_with_dilation(T)) return dilate_by_root(deformed_power(T, m, N), N);

  // T mixes orders under dilation, so dilate first; this needs rational moments.
  int root = 0;
  if (!is_square(N, root) && !odd_moments_vanish(m))
    fail(ErrorCode::InvalidSpec, "this transform needs a symmetric input or a square N");
  std::vector<Rational> scaled;
  for (int n = 1; n <= K; ++n) {
    Rational v = m(n);
    if (root > 0) v /= pow(Rational(root), static_cast<unsigned>(n));
    else if (n % 2 == 0) v /= pow(Rational(N), static_cast<unsigned>(n / 2));
    scaled.push_back(v);
  }
  return from_exact(deformed_power(T, MomentSeq(scaled), N), N);
}

PairIterateResult clt_iterate_pair(const MomentPair& p, int N, int K) {
  if (N < 1) fail(ErrorCode::InvalidSpec, "N must be positive");
  MomentPair q{p.first.truncated(std::min(K, p.first.order())), p.second.truncated(std::min(K, p.second.order()))};
  if (q.first.order() < K || q.second.order() < K)
    fail(ErrorCode::InsufficientOrder, "the input has fewer than K moments");
  if (K < 2) fail(ErrorCode::InsufficientOrder, "the CLT needs at least two moments");
  if (q.first(1) != 0 || q.second(1) != 0) fail(ErrorCode::NotNormalized, "the pair CLT needs mean zero in both slots");
  if (q.first(2) <= 0 || q.second(2) <= 0) fail(ErrorCode::NotNormalized, "the pair CLT needs positive variances");
  MomentPair power = cmonotone_power(q, N);
  return {dilate_by_root(power.first, N), dilate_by_root(power.second, N)};
}

namespace {
MomentSeq small_bernoulli(const Rational& lambda, int N, int K) {
  Rational p = lambda / N;
  if (p > 1) fail(ErrorCode::InvalidSpec, "need N >= lambda");
  return MomentSeq(std::vector<Rational>(static_cast<std::size_t>(K), p));
}
}  // namespace

IterateResult poisson_iterate(const Rational& lambda, const Transform& T, int N, int K) {
  if (N < 1) fail(ErrorCode::InvalidSpec, "N must be positive");
  if (lambda < 0) fail(ErrorCode::InvalidSpec, "lambda must be nonnegative");
  return from_exact(deformed_power(T, small_bernoulli(lambda, N, K), N), N);
}

PairIterateResult poisson_iterate_pair(const Rational& lambda, const Rational& rho, int N, int K) {
  if (N < 1) fail(ErrorCode::InvalidSpec, "N must be positive");
  if (lambda < 0 || rho < 0) fail(ErrorCode::InvalidSpec, "lambda and rho must be nonnegative");
  MomentPair power = cmonotone_power({small_bernoulli(lambda, N, K), small_bernoulli(rho, N, K)}, N);
  return {from_exact(power.first, N), from_exact(power.second, N)};
}

std::optional<LimitLaw> clt_limit_law(const Transform& T) {
  return std::visit(
      [](const auto& x) -> std::optional<LimitLaw> {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, xform::Identity>) {
          return LimitLaw::deformed_clt_t(1);
        } else if constexpr (std::is_same_v<X, xform::ToDelta0> || std::is_same_v<X, xform::Fu>) {
          return LimitLaw::deformed_clt_0a(0);
        } else if constexpr (std::is_same_v<X, xform::Ut>) {
          if (x.t == 0) return LimitLaw::deformed_clt_0a(0);
          return LimitLaw::deformed_clt_t(x.t);
        } else if constexpr (std::is_same_v<X, xform::Vtua>) {
          // on normalized inputs V_{t,u,a} only sees t and a
          if (x.t == 0) return LimitLaw::deformed_clt_0a(x.a);
          if (x.a == 0) return LimitLaw::deformed_clt_t(x.t);
          return std::nullopt;
        } else if constexpr (std::is_same_v<X, xform::XiT>) {
          return LimitLaw::xi_arcsine_clt(x.t);
        } else {
          return std::nullopt;
        }
      },
      T);
}

LimitLaw clt_limit_law(const MomentPair& p) { return LimitLaw::kesten(p.first(2), p.second(2)); }

std::optional<LimitLaw> poisson_limit_law(const Transform& T, const Rational& lambda) {
  return std::visit(
      [&](const auto& x) -> std::optional<LimitLaw> {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, xform::Identity>) {
          return LimitLaw::cmonotone_poisson(lambda, lambda);
        } else if constexpr (std::is_same_v<X, xform::ToDelta0>) {
          return LimitLaw::deformed_poisson(0, 0, lambda);
        } else if constexpr (std::is_same_v<X, xform::Fu>) {
          return LimitLaw::deformed_poisson(x.u, 0, lambda);
        } else if constexpr (std::is_same_v<X, xform::Vtua>) {
          if (x.t == 0) return LimitLaw::deformed_poisson(x.u, x.a, lambda);
          if (x.t == 1 && x.u == 1 && x.a == 0) return LimitLaw::cmonotone_poisson(lambda, lambda);
          return std::nullopt;
        } else if constexpr (std::is_same_v<X, xform::XiT>) {
          return LimitLaw::xi_arcsine_poisson(x.t, lambda);
        } else {
          return std::nullopt;
        }
      },
      T);
}

ConvergenceReport convergence_report(const std::vector<IterateResult>& runs, const MomentSeq& reference) {
  ConvergenceReport rep;
  for (const auto& run : runs) {
    double err = 0, rel = 0;
    int K = std::min(static_cast<int>(run.moments.size()), reference.order());
    for (int n = 1; n <= K; ++n) {
      double e = run.exact ? std::abs(d(run.exact->values()[static_cast<std::size_t>(n - 1)] - reference(n)))
                           : std::abs(run.moments[static_cast<std::size_t>(n - 1)] - d(reference(n)));
      err = std::max(err, e);
      rel = std::max(rel, e / std::max(1.0, std::abs(d(reference(n)))));
    }
    rep.N.push_back(run.N);
    rep.max_error.push_back(err);
    rep.max_rel_error.push_back(rel);
  }
  std::size_t n = rep.N.size();
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double x = std::log(static_cast<double>(rep.N[i]));
      double y = std::log(std::max(rep.max_error[i], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double denom = static_cast<double>(n) * sxx - sx * sx;
    if (denom != 0) rep.slope = -(static_cast<double>(n) * sxy - sx * sy) / denom;
  }
  return rep;
}

}  // namespace cmono
