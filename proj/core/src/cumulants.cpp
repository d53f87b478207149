#include "cmono/cumulants.hpp"

#include "cmono/convolutions.hpp"
#include "cmono/error.hpp"

#include <algorithm>

namespace cmono {

const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::Monotone: return "monotone";
    case Flavor::Boolean: return "boolean";
    case Flavor::Free: return "free";
    case Flavor::CFreePair: return "cfree";
    case Flavor::CMonotonePair: return "cmonotone";
  }
  return "?";
}

Flavor parse_flavor(const std::string& name) {
  for (Flavor f : {Flavor::Monotone, Flavor::Boolean, Flavor::Free, Flavor::CFreePair, Flavor::CMonotonePair})
    if (name == flavor_name(f)) return f;
  fail(ErrorCode::InvalidSpec, "unknown cumulant flavor '" + name + "'");
}

namespace {

int common_order(const MomentSeq& a, const MomentSeq& b) { return std::min(a.order(), b.order()); }

std::vector<Rational> head(const MomentSeq& m, int K) { return m.truncated(K).values(); }

}  // namespace

CumulantSeq cmonotone_cumulants(const MomentSeq& mu, const MomentSeq& nu) {
  int K = common_order(mu, nu);
  auto rs = solve_monotone_cumulants(head(nu, K), K);
  auto rp = solve_pair_cumulants(head(mu, K), rs, K);
  return {Flavor::CMonotonePair, rp, rs};
}

CumulantSeq monotone_cumulants(const MomentSeq& m) {
  auto r = solve_monotone_cumulants(m.values(), m.order());
  return {Flavor::Monotone, r, {}};
}

CumulantSeq boolean_cumulants(const MomentSeq& m) {
  MomentSeq delta0(std::vector<Rational>(static_cast<std::size_t>(m.order()), Rational(0)));
  auto c = cmonotone_cumulants(m, delta0);
  return {Flavor::Boolean, c.r, {}};
}

CumulantSeq free_cumulants(const MomentSeq& m) {
  auto R = solve_cfree_cumulants(m.values(), m.values(), m.order());
  return {Flavor::Free, R, {}};
}

CFreeCumulants free_and_cfree_cumulants(const MomentSeq& mu, const MomentSeq& nu) {
  int K = common_order(mu, nu);
  auto m_nu = head(nu, K);
  return {solve_cfree_cumulants(m_nu, m_nu, K), solve_cfree_cumulants(head(mu, K), m_nu, K)};
}

MomentSeq moments_from_cmonotone(const std::vector<Rational>& r_pair, const std::vector<Rational>& r_single,
                                 const Rational& t) {
  int K = static_cast<int>(std::min(r_pair.size(), r_single.size()));
  auto polys = moment_polynomials(r_pair, r_single, K);
  std::vector<Rational> m;
  for (int n = 1; n <= K; ++n) m.push_back(polys[static_cast<std::size_t>(n)].at(t));
  return MomentSeq(std::move(m));
}

MomentSeq moments_from_monotone(const std::vector<Rational>& r, const Rational& t) {
  return moments_from_cmonotone(r, r, t);
}

MomentSeq moments_from_boolean(const std::vector<Rational>& r) {
  int K = static_cast<int>(r.size());
  Series<Rational> B = Series<Rational>::constant(Rational(1), K);
  for (int n = 1; n <= K; ++n) B[n] = -r[static_cast<std::size_t>(n - 1)];
  return MomentSeq::from_h_series(B);
}

std::vector<TPoly<Rational>> moment_polynomials(const MomentSeq& mu, const MomentSeq& nu) {
  auto c = cmonotone_cumulants(mu, nu);
  return moment_polynomials(c.r, c.companion, c.order());
}

// ---------------------------------------------------------------------------

namespace formal {

std::string name(int var) {
  if (var < kStride) return "m" + std::to_string(var + 1) + "(mu)";
  return "m" + std::to_string(var - kStride + 1) + "(nu)";
}

std::vector<MPoly> mu_moments(int K) {
  std::vector<MPoly> v;
  for (int n = 1; n <= K; ++n) v.push_back(MPoly::var(mu_moment(n)));
  return v;
}

std::vector<MPoly> nu_moments(int K) {
  std::vector<MPoly> v;
  for (int n = 1; n <= K; ++n) v.push_back(MPoly::var(nu_moment(n)));
  return v;
}

}  // namespace formal

MPoly CFreeRelation::coefficient(int n, int k) const {
  auto it = P.find({n, k});
  return it == P.end() ? MPoly() : it->second;
}

CFreeRelation cmonotone_vs_cfree(int K) {
  if (K < 1 || K > 8) fail(ErrorCode::SizeCap, "the r-R relation is solved for orders 1..8");
  auto mu = formal::mu_moments(K);
  auto nu = formal::nu_moments(K);
  auto rs = solve_monotone_cumulants(nu, K);
  auto r = solve_pair_cumulants(mu, rs, K);
  auto R = solve_cfree_cumulants(mu, nu, K);

  CFreeRelation rel;
  rel.order = K;
  for (int n = 1; n <= K; ++n) {
    MPoly rest = r[static_cast<std::size_t>(n - 1)] - R[static_cast<std::size_t>(n - 1)];
    // R_k is the only remaining term that carries m_k(mu); peel from the top
    for (int k = n - 1; k >= 2; --k) {
      int var = formal::mu_moment(k);
      if (rest.degree_in(var) > 1)
        fail(ErrorCode::InconsistentSystem, "r_" + std::to_string(n) + " - R_" + std::to_string(n) + " is not linear in R_" + std::to_string(k));
      MPoly Pnk = rest.coeff_of(var, 1);
      for (int j = 1; j <= K; ++j)
        if (Pnk.depends_on(formal::mu_moment(j)))
          fail(ErrorCode::InconsistentSystem, "P_{" + std::to_string(n) + "," + std::to_string(k) + "} depends on moments of mu");
      if (!Pnk.is_zero()) {
        rest -= Pnk * R[static_cast<std::size_t>(k - 1)];
        rel.P[{n, k}] = Pnk;
      }
    }
    if (!rest.is_zero())
      fail(ErrorCode::InconsistentSystem, "r_" + std::to_string(n) + " is not a combination of R_2..R_n");
  }
  return rel;
}

// ---------------------------------------------------------------------------

MomentSeq convolution_power(const MomentConvolution& conv, const MomentSeq& m, int N) {
  if (N <= 0) return MomentSeq(std::vector<Rational>(static_cast<std::size_t>(m.order()), Rational(0)));
  MomentSeq acc = m;
  for (int i = 2; i <= N; ++i) acc = conv(m, acc);
  return acc;
}

CumulantSeq generic_cumulants(const MomentConvolution& conv, const MomentSeq& m, Flavor label) {
  int K = m.order();
  // m_n(mu^N) for N = 0..K+1; one extra point certifies degree <= n
  std::vector<MomentSeq> powers;
  for (int N = 0; N <= K + 1; ++N) powers.push_back(convolution_power(conv, m, N));
  std::vector<Rational> r;
  for (int n = 1; n <= K; ++n) {
    // forward differences at N = 0; d/dN binom(N, j) at 0 is (-1)^(j-1)/j
    std::vector<Rational> diff;
    for (int N = 0; N <= n + 1; ++N) diff.push_back(powers[static_cast<std::size_t>(N)](n));
    Rational deriv(0);
    for (int j = 1; j <= n + 1; ++j) {
      for (int i = 0; i + j <= n + 1; ++i) diff[static_cast<std::size_t>(i)] = diff[static_cast<std::size_t>(i + 1)] - diff[static_cast<std::size_t>(i)];
      const Rational& delta = diff[0];
      if (j == n + 1) {
        if (delta != 0)
          fail(ErrorCode::NonPolynomialGrowth, "m_" + std::to_string(n) + "(mu^N) is not a polynomial of degree <= n in N");
      } else {
        deriv += delta * Rational(j % 2 == 1 ? 1 : -1) / Rational(j);
      }
    }
    r.push_back(deriv);
  }
  return {label, r, {}};
}

bool AxiomReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

namespace {

std::string first_mismatch(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    if (a[i] != b[i]) return "order " + std::to_string(i + 1) + ": " + to_string(a[i]) + " vs " + to_string(b[i]);
  return a.size() == b.size() ? "" : "length mismatch";
}

std::vector<Rational> scaled(const std::vector<Rational>& v, const Rational& s) {
  std::vector<Rational> out = v;
  for (auto& x : out) x *= s;
  return out;
}

std::vector<Rational> dilation_weights(const std::vector<Rational>& v, const Rational& lambda) {
  std::vector<Rational> out = v;
  Rational p(1);
  for (auto& x : out) {
    p *= lambda;
    x *= p;
  }
  return out;
}

}  // namespace

AxiomReport verify_axioms(const CumulantExtractor& r, const MomentConvolution& conv, const std::vector<MomentSeq>& samples,
                          int max_power, bool homogeneous) {
  AxiomReport rep;
  AxiomCheck power{"power additivity", true, ""};
  AxiomCheck homog{"homogeneity", true, ""};
  AxiomCheck leading{"moment-leading", true, ""};
  for (const auto& m : samples) {
    auto base = r(m);
    for (int N = 1; N <= max_power && power.passed; ++N) {
      auto got = r(convolution_power(conv, m, N));
      auto want = scaled(base, Rational(N));
      if (got != want) {
        power.passed = false;
        power.detail = "N=" + std::to_string(N) + " " + first_mismatch(got, want);
      }
    }
    if (homogeneous) {
      for (const Rational& lambda : {Rational(2), rat(1, 3)}) {
        auto got = r(dilate(m, lambda));
        auto want = dilation_weights(base, lambda);
        if (got != want && homog.passed) {
          homog.passed = false;
          homog.detail = "lambda=" + to_string(lambda) + " " + first_mismatch(got, want);
        }
      }
    }
    // r_n = m_n + polynomial in m_1..m_{n-1}: bumping m_n moves r_n alone, by the same amount
    for (int n = 1; n <= m.order() && leading.passed; ++n) {
      std::vector<Rational> bumped = m.values();
      bumped[static_cast<std::size_t>(n - 1)] += 1;
      auto got = r(MomentSeq(bumped));
      for (int k = 1; k <= m.order(); ++k) {
        Rational expect = base[static_cast<std::size_t>(k - 1)] + (k == n ? Rational(1) : Rational(0));
        if (k <= n && got[static_cast<std::size_t>(k - 1)] != expect) {
          leading.passed = false;
          leading.detail = "bumping m_" + std::to_string(n) + " changed r_" + std::to_string(k) + " wrongly";
          break;
        }
      }
    }
  }
  rep.checks.push_back(power);
  if (homogeneous) rep.checks.push_back(homog);
  rep.checks.push_back(leading);
  return rep;
}

AxiomReport verify_pair_axioms(const std::vector<std::pair<MomentSeq, MomentSeq>>& samples, int max_power) {
  AxiomReport rep;
  AxiomCheck additive{"pair power additivity", true, ""};
  AxiomCheck homog{"pair homogeneity", true, ""};
  AxiomCheck leading{"moment-leading (formal)", true, ""};
  AxiomCheck boolean_r{"boolean sum in the first slot (c-monotone)", true, ""};
  AxiomCheck boolean_R{"boolean sum in the first slot (c-free)", true, ""};

  for (const auto& [mu, nu] : samples) {
    auto base = cmonotone_cumulants(mu, nu).r;
    MomentPair p{mu, nu};
    for (int N = 1; N <= max_power && additive.passed; ++N) {
      MomentPair pN = cmonotone_power(p, N);
      auto got = cmonotone_cumulants(pN.first, pN.second).r;
      auto want = scaled(base, Rational(N));
      if (got != want) {
        additive.passed = false;
        additive.detail = "N=" + std::to_string(N) + " " + first_mismatch(got, want);
      }
    }
    for (const Rational& lambda : {Rational(3), rat(1, 2)}) {
      auto got = cmonotone_cumulants(dilate(mu, lambda), dilate(nu, lambda)).r;
      auto want = dilation_weights(base, lambda);
      if (got != want && homog.passed) {
        homog.passed = false;
        homog.detail = "lambda=" + to_string(lambda) + " " + first_mismatch(got, want);
      }
    }
  }

  // formal check of the leading term: r_n(mu, nu) - m_n(mu) involves only lower moments
  {
    const int K = 6;
    auto mu = formal::mu_moments(K);
    auto nu = formal::nu_moments(K);
    auto r = solve_pair_cumulants(mu, solve_monotone_cumulants(nu, K), K);
    for (int n = 1; n <= K && leading.passed; ++n) {
      MPoly rest = r[static_cast<std::size_t>(n - 1)] - mu[static_cast<std::size_t>(n - 1)];
      for (int j = n; j <= K; ++j)
        if (rest.depends_on(formal::mu_moment(j)) || rest.depends_on(formal::nu_moment(j))) {
          leading.passed = false;
          leading.detail = "r_" + std::to_string(n) + " depends on order-" + std::to_string(j) + " moments";
        }
    }
  }

  // r_n(mu boolean-plus nu, lambda) = r_n(mu, lambda) + r_n(nu, lambda), and the same for R_n
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const MomentSeq& a = samples[i].first;
    const MomentSeq& b = samples[i + 1].first;
    const MomentSeq& lam = samples[i].second;
    MomentSeq ab = boolean_convolve(a, b);
    auto lhs = cmonotone_cumulants(ab, lam).r;
    auto ra = cmonotone_cumulants(a, lam).r, rb = cmonotone_cumulants(b, lam).r;
    std::vector<Rational> sum(lhs.size());
    for (std::size_t k = 0; k < lhs.size(); ++k) sum[k] = ra[k] + rb[k];
    if (lhs != sum && boolean_r.passed) {
      boolean_r.passed = false;
      boolean_r.detail = first_mismatch(lhs, sum);
    }
    auto Lhs = free_and_cfree_cumulants(ab, lam).pair;
    auto Ra = free_and_cfree_cumulants(a, lam).pair, Rb = free_and_cfree_cumulants(b, lam).pair;
    std::vector<Rational> Sum(Lhs.size());
    for (std::size_t k = 0; k < Lhs.size(); ++k) Sum[k] = Ra[k] + Rb[k];
    if (Lhs != Sum && boolean_R.passed) {
      boolean_R.passed = false;
      boolean_R.detail = first_mismatch(Lhs, Sum);
    }
  }

  rep.checks = {additive, homog, leading, boolean_r, boolean_R};
  return rep;
}

}  // namespace cmono
