#include "acceptance_suite.hpp"

#include "cmono/convolutions.hpp"
#include "cmono/cumulants.hpp"
#include "cmono/error.hpp"
#include "cmono/limits.hpp"
#include "cmono/measures.hpp"
#include "cmono/mixed_moments.hpp"
#include "cmono/partitions.hpp"
#include "cmono/semigroups.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

namespace cmono::acceptance {

namespace {

// Tolerances and sizes, fixed here so every run checks the same thing.
constexpr double kTableSeconds = 5.0;
constexpr double kDualTrackSeconds = 60.0;
constexpr int kDualTrackSamples = 50;
constexpr int kDualTrackOrder = 8;
constexpr int kAdditivitySamples = 20;
constexpr int kAdditivityMaxN = 5;
constexpr int kMixedTableSets = 10;
constexpr int kMixedDegree = 12;
constexpr int kTransformSamples = 30;
constexpr double kArcsineFlowTol = 1e-9;
constexpr double kTTransformTol = 1e-8;
constexpr double kLimitTol = 5e-2;
constexpr double kMinSlope = 0.9;
constexpr double kDensityTol = 1e-6;
constexpr double kMassTol = 1e-3;
constexpr double kVGridTol = 1e-12;
constexpr int kConeSamples = 100;

using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(3);
  ss << x;
  return ss.str();
}

Rational random_rational(std::mt19937_64& rng, int range, int max_den) {
  std::uniform_int_distribution<int> num(-range, range), den(1, max_den);
  return rat(num(rng), den(rng));
}

// Merge r_k(nu) into r_k(mu, nu): the single-measure monotone formula.
MPoly collapse_pair(const MPoly& p) {
  MPoly out;
  for (const auto& [mono, c] : p.terms()) {
    Monomial m;
    for (std::size_t v = 0; v < mono.size(); ++v) {
      if (mono[v] == 0) continue;
      std::size_t target = v >= static_cast<std::size_t>(kSingleOffset) ? v - kSingleOffset : v;
      if (m.size() <= target) m.resize(target + 1, 0);
      m[target] += mono[v];
    }
    out += MPoly::term(c, m);
  }
  return out;
}

Monomial mono(std::initializer_list<std::pair<int, unsigned>> powers) {
  Monomial m;
  for (auto [v, e] : powers) {
    if (m.size() <= static_cast<std::size_t>(v)) m.resize(static_cast<std::size_t>(v) + 1, 0);
    m[static_cast<std::size_t>(v)] += e;
  }
  return m;
}

// r_k(mu, nu) and r_k(nu) as formula variables
int rp(int k) { return k - 1; }
int rs(int k) { return kSingleOffset + k - 1; }

CriterionResult c1_tables() {
  CriterionResult r{1, "moment-cumulant tables", true, "", 0};
  const MPoly& f4 = cmonotone_formula(4);
  // m_4 = r4 + 3 r1 r3 + 3/2 r2^2 + 13/3 r1^2 r2 + r1^4
  MPoly monotone = collapse_pair(f4);
  MPoly expected_mono = MPoly::term(1, mono({{rp(4), 1}})) + MPoly::term(3, mono({{rp(1), 1}, {rp(3), 1}})) +
                        MPoly::term(rat(3, 2), mono({{rp(2), 2}})) + MPoly::term(rat(13, 3), mono({{rp(1), 2}, {rp(2), 1}})) +
                        MPoly::term(1, mono({{rp(1), 4}}));
  MPoly expected_pair =
      MPoly::term(1, mono({{rp(4), 1}})) + MPoly::term(2, mono({{rp(3), 1}, {rp(1), 1}})) +
      MPoly::term(1, mono({{rp(3), 1}, {rs(1), 1}})) + MPoly::term(1, mono({{rp(2), 2}})) +
      MPoly::term(rat(1, 2), mono({{rp(2), 1}, {rs(2), 1}})) + MPoly::term(3, mono({{rp(2), 1}, {rp(1), 2}})) +
      MPoly::term(1, mono({{rp(2), 1}, {rp(1), 1}, {rs(1), 1}})) +
      MPoly::term(rat(1, 3), mono({{rp(2), 1}, {rs(1), 2}})) + MPoly::term(1, mono({{rp(1), 4}}));
  if (monotone != expected_mono) {
    r.passed = false;
    r.detail = "monotone order 4 = " + monotone.str();
  } else if (f4 != expected_pair) {
    r.passed = false;
    r.detail = "pair order 4 = " + f4.str();
  } else {
    r.detail = "5 monotone and 9 pair coefficients exact";
  }
  return r;
}

CriterionResult c2_dual_track() {
  CriterionResult r{2, "recursion vs partition-sum cumulants", true, "", 0};
  std::mt19937_64 rng(20240502);
  int checked = 0;
  for (int s = 0; s < kDualTrackSamples; ++s) {
    std::vector<Rational> m_mu, m_nu;
    if (s % 2 == 0) {
      for (int n = 0; n < kDualTrackOrder; ++n) {
        m_mu.push_back(random_rational(rng, 3, 4));
        m_nu.push_back(random_rational(rng, 3, 4));
      }
    } else {
      m_mu = moments_of_atomic(random_atomic(rng), kDualTrackOrder).values();
      m_nu = moments_of_atomic(random_atomic(rng), kDualTrackOrder).values();
    }
    CumulantSeq c = cmonotone_cumulants(MomentSeq(m_mu), MomentSeq(m_nu));
    std::vector<Rational> pair_vals(static_cast<std::size_t>(kSingleOffset + kDualTrackOrder), Rational(0));
    std::vector<Rational> single_vals = pair_vals;
    for (int k = 1; k <= kDualTrackOrder; ++k) {
      pair_vals[static_cast<std::size_t>(rp(k))] = c(k);
      pair_vals[static_cast<std::size_t>(rs(k))] = c.companion[static_cast<std::size_t>(k - 1)];
      single_vals[static_cast<std::size_t>(rp(k))] = c.companion[static_cast<std::size_t>(k - 1)];
      single_vals[static_cast<std::size_t>(rs(k))] = c.companion[static_cast<std::size_t>(k - 1)];
    }
    for (int n = 1; n <= kDualTrackOrder; ++n) {
      // the cached partition sum, one term per monotone partition shape
      Rational a = cmonotone_formula(n).evaluate(pair_vals);
      Rational b = cmonotone_formula(n).evaluate(single_vals);
      ++checked;
      if (a != m_mu[static_cast<std::size_t>(n - 1)] || b != m_nu[static_cast<std::size_t>(n - 1)]) {
        r.passed = false;
        r.detail = "sample " + std::to_string(s) + " order " + std::to_string(n) + " differs";
        return r;
      }
    }
  }
  r.detail = std::to_string(kDualTrackSamples) + " pairs, " + std::to_string(checked) + " orders exact";
  return r;
}

CriterionResult c3_additivity() {
  CriterionResult r{3, "cumulant additivity under the pair product", true, "", 0};
  std::mt19937_64 rng(77);
  for (int s = 0; s < kAdditivitySamples; ++s) {
    MomentPair p{moments_of_atomic(random_atomic(rng), 8), moments_of_atomic(random_atomic(rng), 8)};
    CumulantSeq base = cmonotone_cumulants(p.first, p.second);
    for (int N = 1; N <= kAdditivityMaxN; ++N) {
      MomentPair q = cmonotone_power(p, N);
      CumulantSeq c = cmonotone_cumulants(q.first, q.second);
      for (int n = 1; n <= 8; ++n)
        if (c(n) != base(n) * N || c.companion[static_cast<std::size_t>(n - 1)] != base.companion[static_cast<std::size_t>(n - 1)] * N) {
          r.passed = false;
          r.detail = "sample " + std::to_string(s) + " N=" + std::to_string(N) + " n=" + std::to_string(n);
          return r;
        }
    }
  }
  r.detail = std::to_string(kAdditivitySamples) + " pairs, N <= 5, n <= 8";
  return r;
}

CriterionResult c4_cfree_relation() {
  CriterionResult r{4, "pair vs c-free cumulant relation", true, "", 0};
  CFreeRelation rel = cmonotone_vs_cfree(6);
  for (const auto& [key, poly] : rel.P)
    for (const auto& [m, c] : poly.terms())
      for (std::size_t v = 0; v < m.size(); ++v)
        if (m[v] != 0 && static_cast<int>(v) < formal::kStride) {
          r.passed = false;
          r.detail = "P_{" + std::to_string(key.first) + "," + std::to_string(key.second) + "} uses a moment of mu";
          return r;
        }
  MPoly p32 = rel.coefficient(3, 2);
  if (p32 != MPoly::var(formal::nu_moment(1)) * rat(1, 2)) {
    r.passed = false;
    r.detail = "P_{3,2} = " + p32.str();
    return r;
  }
  std::mt19937_64 rng(4);
  for (int s = 0; s < 20; ++s) {
    MomentSeq mu = moments_of_atomic(random_atomic(rng), 6), nu = moments_of_atomic(random_atomic(rng), 6);
    CFreeCumulants fc = free_and_cfree_cumulants(mu, nu);
    CumulantSeq c = cmonotone_cumulants(mu, nu);
    if (c(3) != fc.pair[2] + rat(1, 2) * nu(1) * fc.pair[1]) {
      r.passed = false;
      r.detail = "r_3 relation fails on sample " + std::to_string(s);
      return r;
    }
    std::vector<Rational> nu_vals(static_cast<std::size_t>(formal::kStride) + 6, Rational(0));
    for (int j = 1; j <= 6; ++j) nu_vals[static_cast<std::size_t>(formal::nu_moment(j))] = nu(j);
    for (int n = 1; n <= 6; ++n) {
      Rational v = fc.pair[static_cast<std::size_t>(n - 1)];
      for (int k = 2; k < n; ++k) v += rel.coefficient(n, k).evaluate(nu_vals) * fc.pair[static_cast<std::size_t>(k - 1)];
      if (v != c(n)) {
        r.passed = false;
        r.detail = "relation at n=" + std::to_string(n) + " fails on sample " + std::to_string(s);
        return r;
      }
    }
  }
  r.detail = "P_{n,k} free of mu moments for n <= 6; r_3 = R_3 + m_1(nu) R_2 / 2 on 20 samples";
  return r;
}

CriterionResult c5_mixed_moments() {
  CriterionResult r{5, "mixed-moment engine associativity and sums", true, "", 0};
  std::mt19937_64 rng(5150);
  int words = 0;
  for (int set = 0; set < kMixedTableSets; ++set) {
    std::vector<AlgebraSpec> family;
    for (int i = 1; i <= 3; ++i) family.push_back(random_tables(rng, i, kMixedDegree));
    MixedMomentReport a = check_product_associativity(family, 5, 2);
    words += a.words_checked;
    if (!a.passed()) {
      r.passed = false;
      r.detail = "set " + std::to_string(set) + ": " + a.mismatches.front().word + " " + a.mismatches.front().detail;
      return r;
    }
    MixedMomentReport s = check_sum_moments(family[0], family[1], 6);
    if (!s.passed()) {
      r.passed = false;
      r.detail = "sum moments, set " + std::to_string(set) + ": " + s.mismatches.front().detail;
      return r;
    }
  }
  r.detail = std::to_string(words) + " words over " + std::to_string(kMixedTableSets) + " table sets; sums n <= 6";
  return r;
}

CriterionResult c6_transform_identities() {
  CriterionResult r{6, "transform identities on the rational track", true, "", 0};
  std::mt19937_64 rng(66);
  const RationalMap z = RationalMap::identity();
  for (int s = 0; s < kTransformSamples; ++s) {
    RationalMap Hmu = h_of_atomic(random_atomic(rng, 3)), Hnu = h_of_atomic(random_atomic(rng, 3));
    RationalMap mono = monotone_convolve(Hmu, Hnu);
    RationalMap ortho = orthogonal_convolve(Hmu, Hnu);
    if (mono != boolean_convolve(ortho, Hnu)) {
      r.passed = false;
      r.detail = "monotone = orthogonal then boolean fails on sample " + std::to_string(s);
      return r;
    }
    if (cmonotone_convolve(HPair{Hmu, z}, HPair{Hnu, z}) != HPair{boolean_convolve(Hmu, Hnu), z}) {
      r.passed = false;
      r.detail = "(mu, d0)(nu, d0) fails on sample " + std::to_string(s);
      return r;
    }
    if (cmonotone_convolve(HPair{Hmu, Hmu}, HPair{z, Hnu}) != HPair{ortho, mono}) {
      r.passed = false;
      r.detail = "(mu, mu)(d0, nu) fails on sample " + std::to_string(s);
      return r;
    }
  }
  r.detail = std::to_string(kTransformSamples) + " atomic pairs, all three identities exact";
  return r;
}

CriterionResult c7_semigroups() {
  CriterionResult r{7, "semigroup flows", true, "", 0};
  auto grid = default_flow_grid();
  PickField arcsine = PickField::arcsine(1);
  FlowState flow = integrate_flow(arcsine, arcsine, 1.0, grid);
  double f1 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) f1 = std::max(f1, std::abs(flow.F[i] - sqrt_branch(grid[i] * grid[i] - 2.0)));
  LawResidual la = verify_semigroup_law(arcsine, arcsine, 0.5, 0.5, grid);
  PickField poisson = PickField::monotone_poisson(1);
  LawResidual lp = verify_semigroup_law(poisson, poisson, 0.3, 0.7, grid);
  const Rational ratio = rat(1, 2);
  FlowState tflow = integrate_flow(arcsine.scaled(ratio), arcsine, 1.0, grid);
  double tr = 0;
  double rr = to_double(ratio);
  for (std::size_t i = 0; i < grid.size(); ++i)
    tr = std::max(tr, std::abs(tflow.H[i] - ((1 - rr) * grid[i] + rr * tflow.F[i])));
  r.passed = f1 < kArcsineFlowTol && la.passed() && lp.passed() && tr < kTTransformTol;
  r.detail = "F1 err " + fmt(f1) + ", law residual arcsine " + fmt(std::max(la.F_residual, la.H_residual)) + ", Poisson " +
             fmt(std::max(lp.F_residual, lp.H_residual)) + ", t-transform " + fmt(tr);
  return r;
}

CriterionResult c8_divisibility() {
  CriterionResult r{8, "infinite divisibility Hankel test", true, "", 0};
  const int K = 4;
  std::vector<Rational> arcsine(2 * K, Rational(0));
  arcsine[1] = 1;
  std::vector<Rational> poisson(2 * K, Rational(1));
  DivisibilityVerdict va = is_infinitely_divisible(arcsine, arcsine, K);
  DivisibilityVerdict vp = is_infinitely_divisible(poisson, poisson, K);
  MomentSeq bern(to_rationals({0, 1, 0, 1}));
  CumulantSeq cb = monotone_cumulants(bern);
  DivisibilityVerdict vb = is_infinitely_divisible(bern, bern, 2);
  bool hankel_ok = cb(2) == 1 && cb(3) == 0 && cb(4) == rat(-1, 2);
  r.passed = va.divisible && vp.divisible && !vb.divisible && hankel_ok && va.tracks_agree && vp.tracks_agree &&
             vb.tracks_agree;
  r.detail = "arcsine " + std::string(va.divisible ? "PSD" : "not PSD") + ", Poisson " +
             (vp.divisible ? "PSD" : "not PSD") + ", Bernoulli [[" + to_string(cb(2)) + "," + to_string(cb(3)) + "],[" +
             to_string(cb(3)) + "," + to_string(cb(4)) + "]] " + (vb.divisible ? "accepted" : "rejected") +
             " (min eig " + fmt(vb.min_eig()) + "); tracks " + (va.tracks_agree && vp.tracks_agree && vb.tracks_agree ? "agree" : "disagree");
  return r;
}

CriterionResult c9_limits() {
  CriterionResult r{9, "CLT and Poisson convergence", true, "", 0};
  const std::vector<int> Ns = {64, 128, 256, 512};
  const int K = 6;
  MomentPair clt_in{MomentSeq(to_rationals({0, 1, 0, 1, 0, 1})),
                    moments_of_atomic(AtomicMeasure({{-2, rat(1, 4)}, {0, rat(1, 2)}, {2, rat(1, 4)}}), K)};
  std::vector<IterateResult> c1, c2, p1, p2;
  for (int N : Ns) {
    auto c = clt_iterate_pair(clt_in, N, K);
    c1.push_back(c.first);
    c2.push_back(c.second);
    auto p = poisson_iterate_pair(1, 2, N, K);
    p1.push_back(p.first);
    p2.push_back(p.second);
  }
  LimitLaw kesten = clt_limit_law(clt_in);
  auto rc1 = convergence_report(c1, limit_law_moments(kesten, K));
  auto rc2 = convergence_report(c2, limit_law_moments(LimitLaw::kesten(clt_in.second(2), clt_in.second(2)), K));
  auto rp1 = convergence_report(p1, limit_law_moments(LimitLaw::cmonotone_poisson(1, 2), K));
  auto rp2 = convergence_report(p2, limit_law_moments(LimitLaw::cmonotone_poisson(2, 2), K));
  std::ostringstream ss;
  for (const auto* rep : {&rc1, &rc2, &rp1, &rp2}) {
    if (rep->max_rel_error.back() > kLimitTol || rep->slope < kMinSlope) r.passed = false;
  }
  ss << kesten.str() << " err " << fmt(rc1.max_rel_error.back()) << " slope " << fmt(rc1.slope) << "; arcsine slot err "
     << fmt(rc2.max_rel_error.back()) << "; cmpoisson:1,2 err " << fmt(rp1.max_rel_error.back()) << " (abs "
     << fmt(rp1.max_error.back()) << ") slope " << fmt(rp1.slope) << "; p_2 slot err " << fmt(rp2.max_rel_error.back());
  r.detail = ss.str();
  return r;
}

CriterionResult c10_densities() {
  CriterionResult r{10, "limit densities and masses", true, "", 0};
  LimitLaw law = LimitLaw::deformed_clt_0a(1);
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(-1.0 + (i + 0.5) / 20.0);
  DensityReport rep = limit_law_density(law, grid);
  double worst = 0;
  for (const auto& p : rep.table) worst = std::max(worst, std::abs(p.density - *stated_density(law, p.x)));
  LimitLaw xi = LimitLaw::xi_arcsine_poisson(rat(1, 4), rat(1, 2));
  DensityReport rx = limit_law_density(xi, {});
  double m1 = std::abs(rep.total_mass() - 1), m2 = std::abs(rx.total_mass() - 1);
  r.passed = worst < kDensityTol && m1 < kMassTol && m2 < kMassTol && rep.atoms.size() == 2;
  r.detail = "density err " + fmt(worst) + ", mass err " + fmt(m1) + " (" + std::to_string(rep.atoms.size()) +
              " atoms); " + xi.str() + " mass err " + fmt(m2) + " (" +
             std::to_string(limit_law_geometry(xi).atom_candidates.size()) + " singular intervals searched, " +
             std::to_string(rx.atoms.size()) + " atom)";
  return r;
}

CriterionResult c11_v_algebra() {
  CriterionResult r{11, "V-transform composition and inverse", true, "", 0};
  const std::vector<xform::Vtua> vs = {{rat(1, 2), rat(1, 3), 2}, {3, rat(1, 4), -1}, {rat(2, 3), rat(5, 2), rat(1, 2)},
                                      {1, 1, 0}, {rat(5, 4), -2, rat(3, 4)}};
  AtomicMeasure mu({{-1, rat(1, 3)}, {2, rat(2, 3)}});
  auto grid = default_flow_grid();
  double worst = 0;
  for (const auto& outer : vs)
    for (const auto& inner : vs) {
      xform::Vtua c = compose(outer, inner);
      xform::Vtua expected{outer.t * inner.t, outer.u * inner.u, outer.u * inner.a + outer.a * inner.t};
      if (!(c == expected)) {
        r.passed = false;
        r.detail = "composition parameters differ";
        return r;
      }
      worst = std::max(worst, transform_grid_residual({outer, inner}, {c}, mu, grid));
    }
  for (const auto& v : vs) {
    xform::Vtua inv = invert(v);
    if (!(compose(v, inv) == xform::Vtua{1, 1, 0}) || !(compose(inv, v) == xform::Vtua{1, 1, 0})) {
      r.passed = false;
      r.detail = "inverse parameters differ";
      return r;
    }
    worst = std::max(worst, transform_grid_residual({v, inv}, {xform::Identity{}}, mu, grid));
  }
  r.passed = worst < kVGridTol;
  r.detail = "25 compositions and 5 inverses exact; grid residual " + fmt(worst);
  return r;
}

CriterionResult c12_cones() {
  CriterionResult r{12, "cone preservation vs stated criterion", true, "", 0};
  struct Case {
    xform::Vtua v;
    Cone cone;
  };
  const std::vector<Case> cases = {
      {{rat(1, 2), 1, 0}, Cone::Positive},  {{1, rat(1, 2), 0}, Cone::Positive},   {{rat(1, 2), 1, 1}, Cone::Positive},
      {{rat(1, 2), 1, -1}, Cone::Positive}, {{rat(1, 2), rat(1, 3), 0}, Cone::Symmetric},
      {{rat(1, 2), rat(1, 3), 1}, Cone::Symmetric}, {{rat(1, 2), rat(1, 3), -1}, Cone::Symmetric},
  };
  std::ostringstream ss;
  std::uint64_t seed = 12;
  for (const auto& c : cases) {
    ConeReport rep = check_cone_preservation(c.v, c.cone, kConeSamples, seed++);
    if (!rep.matches_prediction()) {
      r.passed = false;
      ss << (ss.tellp() > 0 ? "; " : "") << "V(" << to_string(c.v.t) << "," << to_string(c.v.u) << "," << to_string(c.v.a)
         << ") " << (c.cone == Cone::Positive ? "positive" : "symmetric") << ": predicted "
         << (rep.predicted_closed ? "closed" : "violations") << ", found " << rep.violations << "/" << rep.samples;
    }
  }
  r.detail = r.passed ? std::to_string(cases.size()) + " cases x " + std::to_string(kConeSamples) + " samples match" : ss.str();
  return r;
}

}  // namespace

std::vector<CriterionResult> run_all(std::ostream& out) {
  const std::vector<std::function<CriterionResult()>> criteria = {
      c1_tables, c2_dual_track, c3_additivity, c4_cfree_relation, c5_mixed_moments, c6_transform_identities,
      c7_semigroups, c8_divisibility, c9_limits, c10_densities, c11_v_algebra, c12_cones,
  };
  std::vector<CriterionResult> results;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = Clock::now();
    CriterionResult res;
    try {
      res = criteria[i]();
    } catch (const std::exception& e) {
      res = {static_cast<int>(i) + 1, "criterion " + std::to_string(i + 1), false, std::string("threw ") + e.what(), 0};
    }
    res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (res.id == 1 && res.seconds >= kTableSeconds) {
      res.passed = false;
      res.detail += "; over the time budget";
    }
    if (res.id == 2 && res.seconds >= kDualTrackSeconds) {
      res.passed = false;
      res.detail += "; over the time budget";
    }
    out << (res.passed ? "PASS" : "FAIL") << " " << res.id << " " << res.name << ": " << res.detail << " ["
        << fmt(res.seconds) << " s]" << std::endl;
    results.push_back(res);
  }
  return results;
}

}  // namespace cmono::acceptance
