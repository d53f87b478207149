#include "cmono/convolutions.hpp"

#include "cmono/cumulants.hpp"
#include "cmono/error.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace cmono {

Series<Rational> compose_b(const Series<Rational>& Bf, const Series<Rational>& Bg) {
  int K = std::min(Bf.order(), Bg.order());
  Series<Rational> g = Bg.truncated(K);
  Series<Rational> inner = g.inverse().times_w();  // w M_g
  return Bf.truncated(K).compose(inner) * g;
}

namespace {

int common_order(const MomentSeq& a, const MomentSeq& b) { return std::min(a.order(), b.order()); }

Series<Rational> b_of(const MomentSeq& m, int K) { return m.truncated(K).h_series(); }

MomentSeq from_b(const Series<Rational>& B) { return MomentSeq::from_h_series(B); }

Series<Rational> one(int K) { return Series<Rational>::constant(Rational(1), K); }

}  // namespace

MomentSeq monotone_convolve(const MomentSeq& mu, const MomentSeq& nu) {
  int K = common_order(mu, nu);
  return from_b(compose_b(b_of(mu, K), b_of(nu, K)));
}

MomentSeq boolean_convolve(const MomentSeq& mu, const MomentSeq& nu) {
  int K = common_order(mu, nu);
  return from_b(b_of(mu, K) + b_of(nu, K) - one(K));
}

MomentSeq orthogonal_convolve(const MomentSeq& mu, const MomentSeq& nu) {
  int K = common_order(mu, nu);
  Series<Rational> Bn = b_of(nu, K);
  return from_b(compose_b(b_of(mu, K), Bn) - Bn + one(K));
}

MomentPair cmonotone_convolve(const MomentPair& p1, const MomentPair& p2) {
  int K = std::min({p1.first.order(), p1.second.order(), p2.first.order(), p2.second.order()});
  Series<Rational> Bn2 = b_of(p2.second, K);
  Series<Rational> first = compose_b(b_of(p1.first, K), Bn2) + b_of(p2.first, K) - Bn2;
  Series<Rational> second = compose_b(b_of(p1.second, K), Bn2);
  return {from_b(first), from_b(second)};
}

MomentPair cfree_convolve(const MomentPair& p1, const MomentPair& p2) {
  int K = std::min({p1.first.order(), p1.second.order(), p2.first.order(), p2.second.order()});
  auto c1 = free_and_cfree_cumulants(p1.first.truncated(K), p1.second.truncated(K));
  auto c2 = free_and_cfree_cumulants(p2.first.truncated(K), p2.second.truncated(K));
  std::vector<Rational> single(static_cast<std::size_t>(K)), pair(static_cast<std::size_t>(K));
  for (std::size_t i = 0; i < static_cast<std::size_t>(K); ++i) {
    single[i] = c1.single[i] + c2.single[i];
    pair[i] = c1.pair[i] + c2.pair[i];
  }
  auto m_nu = moments_from_free_cumulants(single, K);
  auto m_mu = moments_from_cfree_cumulants(pair, m_nu, K);
  return {MomentSeq(m_mu), MomentSeq(m_nu)};
}

MomentSeq boolean_power(const MomentSeq& mu, const Rational& u) {
  int K = mu.order();
  return from_b(b_of(mu, K) * u + one(K) * (1 - u));
}

MomentSeq kappa(const Rational& u, const Rational& v, const MomentSeq& mu, const MomentSeq& nu) {
  return boolean_convolve(boolean_power(mu, u), boolean_power(nu, v));
}

MomentSeq monotone_power(const MomentSeq& mu, int N) {
  if (N <= 0) return MomentSeq(std::vector<Rational>(static_cast<std::size_t>(mu.order()), Rational(0)));
  MomentSeq acc = mu;
  for (int i = 2; i <= N; ++i) acc = monotone_convolve(mu, acc);
  return acc;
}

MomentPair cmonotone_power(const MomentPair& p, int N) {
  if (N <= 0) {
    MomentSeq zero(std::vector<Rational>(static_cast<std::size_t>(p.first.order()), Rational(0)));
    return {zero, zero};
  }
  MomentPair acc = p;
  for (int i = 2; i <= N; ++i) acc = cmonotone_convolve(p, acc);
  return acc;
}

// ---------------------------------------------------------------------------

RationalMap monotone_convolve(const RationalMap& Hmu, const RationalMap& Hnu) { return compose(Hmu, Hnu); }

RationalMap boolean_convolve(const RationalMap& Hmu, const RationalMap& Hnu) {
  return Hmu + Hnu - RationalMap::identity();
}

RationalMap orthogonal_convolve(const RationalMap& Hmu, const RationalMap& Hnu) {
  return compose(Hmu, Hnu) - Hnu + RationalMap::identity();
}

HPair cmonotone_convolve(const HPair& p1, const HPair& p2) {
  return {compose(p1.first, p2.second) + p2.first - p2.second, compose(p1.second, p2.second)};
}

RationalMap boolean_power(const RationalMap& H, const Rational& u) {
  return H * u + RationalMap::identity() * (1 - u);
}

RecoveredMeasure monotone_convolve(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  return measure_from_h(monotone_convolve(h_of_atomic(mu), h_of_atomic(nu)));
}

RecoveredMeasure boolean_convolve(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  return measure_from_h(boolean_convolve(h_of_atomic(mu), h_of_atomic(nu)));
}

RecoveredMeasure orthogonal_convolve(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  return measure_from_h(orthogonal_convolve(h_of_atomic(mu), h_of_atomic(nu)));
}

// ---------------------------------------------------------------------------

std::string describe(const Transform& T) {
  return std::visit(
      [](const auto& x) -> std::string {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, xform::Identity>) return "identity";
        else if constexpr (std::is_same_v<X, xform::ToDelta0>) return "delta0";
        else if constexpr (std::is_same_v<X, xform::Ut>) return "U:" + to_string(x.t);
        else if constexpr (std::is_same_v<X, xform::Vtua>)
          return "V:" + to_string(x.t) + "," + to_string(x.u) + "," + to_string(x.a);
        else if constexpr (std::is_same_v<X, xform::Fu>) return "F:" + to_string(x.u);
        else if constexpr (std::is_same_v<X, xform::XiT>) return "Xi:" + to_string(x.t);
        else return "Xi[" + x.label + "]";
      },
      T);
}

Transform parse_transform(const std::string& text) {
  if (text == "identity" || text == "id" || text == "mono") return xform::Identity{};
  if (text == "delta0" || text == "bool") return xform::ToDelta0{};
  auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorCode::InvalidSpec, "unknown transform '" + text + "'");
  std::string kind = text.substr(0, colon);
  std::vector<Rational> args;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) args.push_back(parse_rational(item));
  auto need = [&](std::size_t n) {
    if (args.size() != n) fail(ErrorCode::InvalidSpec, "transform '" + kind + "' takes " + std::to_string(n) + " parameters");
  };
  if (kind == "U") {
    need(1);
    return xform::Ut{args[0]};
  }
  if (kind == "V") {
    need(3);
    if (args[0] < 0) fail(ErrorCode::InvalidSpec, "V needs t >= 0");
    return xform::Vtua{args[0], args[1], args[2]};
  }
  if (kind == "F") {
    need(1);
    return xform::Fu{args[0]};
  }
  if (kind == "Xi") {
    need(1);
    return xform::XiT{args[0]};
  }
  fail(ErrorCode::InvalidSpec, "unknown transform '" + kind + "'");
}

namespace {

void require_order(const MomentSeq& mu, int k, const char* what) {
  if (mu.order() < k) fail(ErrorCode::TransformInapplicable, std::string(what) + " needs moments up to order " + std::to_string(k));
}

Series<Rational> arcsine_b(const Rational& s, int K) {
  Series<Rational> inside = one(K);
  if (K >= 2) inside[2] = Rational(-2) * s;
  return inside.sqrt_unit();
}

}  // namespace

Series<Rational> transform_b(const Transform& T, const MomentSeq& mu) {
  int K = mu.order();
  return std::visit(
      [&](const auto& x) -> Series<Rational> {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, xform::Identity>) {
          return b_of(mu, K);
        } else if constexpr (std::is_same_v<X, xform::ToDelta0>) {
          return one(K);
        } else if constexpr (std::is_same_v<X, xform::Ut>) {
          return b_of(mu, K) * x.t + one(K) * (1 - x.t);
        } else if constexpr (std::is_same_v<X, xform::Vtua>) {
          Rational c = (x.t - x.u) * mu.mean();
          if (x.a != 0) {
            require_order(mu, 2, "V with a != 0");
            c += x.a * mu.variance();
          } else if (x.t != x.u) {
            require_order(mu, 1, "V");
          }
          Series<Rational> B = b_of(mu, K) * x.t + one(K) * (1 - x.t);
          if (K >= 1) B[1] += c;  // H gains + c, so B gains c w
          return B;
        } else if constexpr (std::is_same_v<X, xform::Fu>) {
          require_order(mu, 1, "F");
          Series<Rational> B = one(K);
          if (K >= 1) B[1] = -x.u * mu.mean();
          return B;
        } else if constexpr (std::is_same_v<X, xform::XiT>) {
          require_order(mu, 2, "Xi");
          return arcsine_b(x.t * mu.variance(), K);
        } else {
          return arcsine_b(x.f(mu), K);
        }
      },
      T);
}

MomentSeq apply_transform(const Transform& T, const MomentSeq& mu) { return from_b(transform_b(T, mu)); }

RationalMap apply_transform(const Transform& T, const RationalMap& Hmu) {
  return std::visit(
      [&](const auto& x) -> RationalMap {
        using X = std::decay_t<decltype(x)>;
        RationalMap z = RationalMap::identity();
        if constexpr (std::is_same_v<X, xform::Identity>) {
          return Hmu;
        } else if constexpr (std::is_same_v<X, xform::ToDelta0>) {
          return z;
        } else if constexpr (std::is_same_v<X, xform::Ut>) {
          return Hmu * x.t + z * (1 - x.t);
        } else if constexpr (std::is_same_v<X, xform::Vtua>) {
          MomentSeq m = moments_of_h(Hmu, 2);
          Rational c = (x.t - x.u) * m.mean() + x.a * m.variance();
          return Hmu * x.t + z * (1 - x.t) + RationalMap::constant(c);
        } else if constexpr (std::is_same_v<X, xform::Fu>) {
          MomentSeq m = moments_of_h(Hmu, 1);
          return z - RationalMap::constant(x.u * m.mean());
        } else {
          fail(ErrorCode::TransformInapplicable, "the arcsine transforms have no rational H; use the moment track");
        }
      },
      T);
}

MomentSeq deformed_convolve(const Transform& T, const MomentSeq& mu, const MomentSeq& nu) {
  int K = common_order(mu, nu);
  Series<Rational> BT = transform_b(T, nu.truncated(K));
  return from_b(compose_b(b_of(mu, K), BT) + b_of(nu, K) - BT);
}

RationalMap deformed_convolve(const Transform& T, const RationalMap& Hmu, const RationalMap& Hnu) {
  RationalMap HT = apply_transform(T, Hnu);
  return compose(Hmu, HT) + Hnu - HT;
}

MomentSeq deformed_power(const Transform& T, const MomentSeq& mu, int N) {
  if (N <= 0) return MomentSeq(std::vector<Rational>(static_cast<std::size_t>(mu.order()), Rational(0)));
  MomentSeq acc = mu;
  for (int i = 2; i <= N; ++i) acc = deformed_convolve(T, mu, acc);
  return acc;
}

AssociativityReport check_T_associativity(const Transform& T, const std::vector<MomentSeq>& samples) {
  AssociativityReport rep;
  for (const auto& a : samples)
    for (const auto& b : samples) {
      ++rep.pairs_checked;
      MomentSeq lhs = apply_transform(T, deformed_convolve(T, a, b));
      MomentSeq rhs = monotone_convolve(apply_transform(T, a), apply_transform(T, b));
      if (lhs != rhs) ++rep.transform_failures;
      for (const auto& c : samples) {
        ++rep.triples_checked;
        if (deformed_convolve(T, deformed_convolve(T, a, b), c) != deformed_convolve(T, a, deformed_convolve(T, b, c)))
          ++rep.triple_failures;
      }
    }
  return rep;
}

xform::Vtua compose(const xform::Vtua& outer, const xform::Vtua& inner) {
  return {outer.t * inner.t, outer.u * inner.u, outer.u * inner.a + outer.a * inner.t};
}

xform::Vtua invert(const xform::Vtua& v) {
  if (v.t <= 0 || v.u == 0) fail(ErrorCode::NotInvertible, "V_{t,u,a} is invertible only for t > 0 and u != 0");
  return {1 / v.t, 1 / v.u, -v.a / (v.t * v.u)};
}

double transform_grid_residual(const std::vector<Transform>& A, const std::vector<Transform>& B, const AtomicMeasure& mu,
                               const std::vector<Complex>& grid) {
  auto run = [&](const std::vector<Transform>& seq) {
    RationalMap H = h_of_atomic(mu);
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) H = apply_transform(*it, H);
    return H;
  };
  RationalMap HA = run(A), HB = run(B);
  double worst = 0;
  for (auto z : grid) worst = std::max(worst, std::abs(HA(z) - HB(z)));
  return worst;
}

bool cone_criterion(const xform::Vtua& v, Cone cone) {
  if (cone == Cone::Positive) return v.u >= v.t && v.a == 0;
  return v.a == 0;
}

bool in_positive_cone(const RationalMap& H) {
  if (!is_atomic_h(H)) return false;
  return count_roots_below(H.num(), Rational(0)) == 0;
}

bool in_symmetric_cone(const RationalMap& H) { return H.is_odd() && is_atomic_h(H); }

namespace {

AtomicMeasure random_positive_measure(std::mt19937_64& rng) {
  static const std::vector<Rational> locations = {Rational(0), rat(1, 16), rat(1, 4), rat(1, 2), Rational(1),
                                                  rat(3, 2), Rational(2), Rational(3), Rational(5)};
  std::uniform_int_distribution<int> count(1, 3), weight(1, 4);
  std::vector<Rational> xs = locations;
  std::shuffle(xs.begin(), xs.end(), rng);
  int k = count(rng);
  std::vector<Atom> atoms;
  Rational total(0);
  for (int i = 0; i < k; ++i) {
    Rational w(weight(rng));
    atoms.push_back({xs[static_cast<std::size_t>(i)], w});
    total += w;
  }
  for (auto& a : atoms) a.w /= total;
  return AtomicMeasure(std::move(atoms));
}

AtomicMeasure random_symmetric_measure(std::mt19937_64& rng) {
  static const std::vector<Rational> locations = {rat(1, 4), rat(1, 2), Rational(1), rat(3, 2), Rational(2), Rational(3)};
  std::uniform_int_distribution<int> pairs(1, 2), weight(1, 4), coin(0, 1);
  std::vector<Rational> xs = locations;
  std::shuffle(xs.begin(), xs.end(), rng);
  int k = pairs(rng);
  bool centre = coin(rng) == 1;
  std::vector<Atom> atoms;
  Rational total(0);
  for (int i = 0; i < k; ++i) {
    Rational w(weight(rng));
    atoms.push_back({xs[static_cast<std::size_t>(i)], w});
    atoms.push_back({-xs[static_cast<std::size_t>(i)], w});
    total += 2 * w;
  }
  if (centre) {
    Rational w(weight(rng));
    atoms.push_back({Rational(0), w});
    total += w;
  }
  for (auto& a : atoms) a.w /= total;
  return AtomicMeasure(std::move(atoms));
}

std::string atoms_str(const AtomicMeasure& m) {
  std::string s = "{";
  for (const auto& a : m.atoms()) s += "(" + to_string(a.x) + "," + to_string(a.w) + ")";
  return s + "}";
}

}  // namespace

ConeReport check_cone_preservation(const xform::Vtua& v, Cone cone, int samples, std::uint64_t seed) {
  ConeReport rep;
  rep.cone = cone;
  rep.transform = v;
  rep.predicted_closed = cone_criterion(v, cone);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    AtomicMeasure mu = cone == Cone::Positive ? random_positive_measure(rng) : random_symmetric_measure(rng);
    AtomicMeasure nu = cone == Cone::Positive ? random_positive_measure(rng) : random_symmetric_measure(rng);
    RationalMap H = deformed_convolve(Transform{v}, h_of_atomic(mu), h_of_atomic(nu));
    bool inside = cone == Cone::Positive ? in_positive_cone(H) : in_symmetric_cone(H);
    ++rep.samples;
    if (!inside) {
      if (rep.violations == 0) rep.example = "mu=" + atoms_str(mu) + " nu=" + atoms_str(nu);
      ++rep.violations;
    }
  }
  return rep;
}

}  // namespace cmono
