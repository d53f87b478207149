#include "support.hpp"

#include "cmono/convolutions.hpp"
#include "cmono/cumulants.hpp"
#include "cmono/partitions.hpp"

using namespace cmono;
using namespace cmono::test;

namespace {

std::vector<Rational> scaled(const std::vector<Rational>& v, const Rational& s) {
  std::vector<Rational> out;
  for (const auto& x : v) out.push_back(x * s);
  return out;
}

std::vector<Rational> plus(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

}  // namespace

TEST_CASE("flavor names") {
  for (Flavor f : {Flavor::Monotone, Flavor::Boolean, Flavor::Free, Flavor::CFreePair, Flavor::CMonotonePair})
    CHECK(parse_flavor(flavor_name(f)) == f);
  CHECK(code_of([] { parse_flavor("classical"); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("monotone cumulants of standard laws") {
  CHECK(monotone_cumulants(arcsine_moments(1, 8)).r == rats({"0", "1", "0", "0", "0", "0", "0", "0"}));
  CHECK(monotone_cumulants(moments_of_atomic(bernoulli(), 4)).r == rats({"0", "1", "0", "-1/2"}));
  CHECK(monotone_cumulants(moments_of_named(MonotonePoissonLaw{3}, 6)).r == std::vector<Rational>(6, Rational(3)));
}

TEST_CASE("Boolean and free cumulants") {
  CHECK(boolean_cumulants(moments_of_atomic(AtomicMeasure::delta(rat(-2, 3)), 5)).r ==
        rats({"-2/3", "0", "0", "0", "0"}));
  CHECK(boolean_cumulants(moments_of_atomic(bernoulli(), 4)).r == rats({"0", "1", "0", "0"}));
  // m4 = R4 + 2 R2^2
  CHECK(free_cumulants(moments_of_atomic(bernoulli(), 4)).r == rats({"0", "1", "0", "-1"}));
}

TEST_CASE("first two cumulants are mean and variance for every flavor") {
  std::mt19937_64 rng(31);
  for (int s = 0; s < 20; ++s) {
    auto mu = random_moments(rng, 4), nu = random_moments(rng, 4);
    for (const auto& r : {monotone_cumulants(mu).r, boolean_cumulants(mu).r, free_cumulants(mu).r,
                          cmonotone_cumulants(mu, nu).r, free_and_cfree_cumulants(mu, nu).pair}) {
      CHECK(r[0] == mu.mean());
      CHECK(r[1] == mu.variance());
    }
  }
}

TEST_CASE("third pair cumulants") {
  std::mt19937_64 rng(32);
  for (int s = 0; s < 25; ++s) {
    auto mu = random_moments(rng, 3), nu = random_moments(rng, 3);
    Rational m1 = mu(1), m2 = mu(2), m3 = mu(3), n1 = nu(1);
    Rational r3 = m3 - 2 * m2 * m1 - rat(1, 2) * n1 * (m2 - m1 * m1) + m1 * m1 * m1;
    Rational R3 = m3 - 2 * m2 * m1 - n1 * (m2 - m1 * m1) + m1 * m1 * m1;
    CHECK(cmonotone_cumulants(mu, nu)(3) == r3);
    CHECK(free_and_cfree_cumulants(mu, nu).pair[2] == R3);
  }
}

TEST_CASE("special cases of the pair cumulants") {
  std::mt19937_64 rng(33);
  auto delta0 = moments_of_atomic(AtomicMeasure::delta(0), 8);
  for (int s = 0; s < 15; ++s) {
    auto mu = random_moments(rng, 8);
    CHECK(cmonotone_cumulants(mu, mu).r == monotone_cumulants(mu).r);
    CHECK(cmonotone_cumulants(mu, delta0).r == boolean_cumulants(mu).r);
    auto cf = free_and_cfree_cumulants(mu, mu);
    CHECK(cf.pair == cf.single);
    CHECK(cf.single == free_cumulants(mu).r);
    CHECK(free_and_cfree_cumulants(mu, delta0).pair == boolean_cumulants(mu).r);
  }
}

TEST_CASE("recursion and partition sums agree") {
  std::mt19937_64 rng(34);
  for (int s = 0; s < 10; ++s) {
    auto m_mu = random_sequence(rng, 8), m_nu = random_sequence(rng, 8);
    auto rs = solve_monotone_cumulants(m_nu, 8);
    auto rp = solve_pair_cumulants(m_mu, rs, 8);
    for (int n = 1; n <= 8; ++n) {
      CHECK(eval_cmonotone_formula(rp, rs, n) == m_mu[static_cast<std::size_t>(n - 1)]);
      CHECK(eval_cmonotone_formula(rs, rs, n) == m_nu[static_cast<std::size_t>(n - 1)]);
    }
    auto Rs = solve_cfree_cumulants(m_nu, m_nu, 8);
    auto Rp = solve_cfree_cumulants(m_mu, m_nu, 8);
    for (int n = 1; n <= 8; ++n) CHECK(eval_cfree_formula(Rp, Rs, n) == m_mu[static_cast<std::size_t>(n - 1)]);
    CHECK(moments_from_free_cumulants(Rs, 8) == m_nu);
    CHECK(moments_from_cfree_cumulants(Rp, m_nu, 8) == m_mu);
  }
}

TEST_CASE("moments rebuilt from cumulants") {
  std::mt19937_64 rng(35);
  for (int s = 0; s < 15; ++s) {
    auto mu = random_moments(rng, 8), nu = random_moments(rng, 8);
    auto c = cmonotone_cumulants(mu, nu);
    CHECK(c.companion == monotone_cumulants(nu).r);
    CHECK(moments_from_cmonotone(c.r, c.companion) == mu);
    CHECK(moments_from_monotone(monotone_cumulants(nu).r) == nu);
    CHECK(moments_from_boolean(boolean_cumulants(mu).r) == mu);

    auto polys = moment_polynomials(mu, nu);
    for (int n = 1; n <= 8; ++n) {
      CHECK(polys[static_cast<std::size_t>(n)].coeff(1) == c(n));
      CHECK(polys[static_cast<std::size_t>(n)].at(Rational(1)) == mu(n));
      CHECK(polys[static_cast<std::size_t>(n)].coeff(0) == 0);
    }
  }
}

TEST_CASE("cumulants are additive under powers of the pair product") {
  std::mt19937_64 rng(36);
  for (int s = 0; s < 8; ++s) {
    MomentPair p{random_moments(rng, 8), random_moments(rng, 8)};
    auto r = cmonotone_cumulants(p.first, p.second).r;
    for (int N = 2; N <= 5; ++N) {
      auto q = cmonotone_power(p, N);
      CHECK(cmonotone_cumulants(q.first, q.second).r == scaled(r, N));
    }
  }
}

TEST_CASE("Boolean sums in the first slot") {
  std::mt19937_64 rng(37);
  for (int s = 0; s < 10; ++s) {
    auto mu = random_moments(rng, 8), nu = random_moments(rng, 8), la = random_moments(rng, 8);
    auto sum = boolean_convolve(mu, nu);
    CHECK(boolean_cumulants(sum).r == plus(boolean_cumulants(mu).r, boolean_cumulants(nu).r));
    CHECK(cmonotone_cumulants(sum, la).r == plus(cmonotone_cumulants(mu, la).r, cmonotone_cumulants(nu, la).r));
    CHECK(free_and_cfree_cumulants(sum, la).pair ==
          plus(free_and_cfree_cumulants(mu, la).pair, free_and_cfree_cumulants(nu, la).pair));

    Rational u = rat(s + 1, 3), v = rat(2, s + 2);
    auto k = kappa(u, v, mu, nu);
    CHECK(cmonotone_cumulants(k, la).r ==
          plus(scaled(cmonotone_cumulants(mu, la).r, u), scaled(cmonotone_cumulants(nu, la).r, v)));
  }
}

TEST_CASE("r and R differ by terms in the moments of the second measure") {
  auto rel = cmonotone_vs_cfree(6);
  CHECK(rel.coefficient(3, 2) == rat(1, 2) * MPoly::var(formal::nu_moment(1)));
  for (const auto& [key, P] : rel.P) {
    CHECK(key.first >= 3);
    CHECK(key.second >= 2);
    CHECK(key.second < key.first);
    // reads m_1(nu)..m_{n-k}(nu) only
    for (int v = 0; v <= P.max_var(); ++v)
      if (P.depends_on(v)) {
        CHECK(v >= formal::nu_moment(1));
        CHECK(v <= formal::nu_moment(key.first - key.second));
      }
  }
  CHECK(code_of([] { cmonotone_vs_cfree(9); }) == ErrorCode::SizeCap);

  std::mt19937_64 rng(38);
  for (int s = 0; s < 10; ++s) {
    auto mu = random_moments(rng, 6), nu = random_moments(rng, 6);
    auto r = cmonotone_cumulants(mu, nu).r;
    auto R = free_and_cfree_cumulants(mu, nu).pair;
    std::vector<Rational> vals(static_cast<std::size_t>(formal::nu_moment(6)) + 1);
    for (int j = 1; j <= 6; ++j) vals[static_cast<std::size_t>(formal::nu_moment(j))] = nu(j);
    CHECK(r[0] == R[0]);
    CHECK(r[1] == R[1]);
    for (int n = 3; n <= 6; ++n) {
      Rational rhs = R[static_cast<std::size_t>(n - 1)];
      for (int k = 2; k < n; ++k) rhs += rel.coefficient(n, k).evaluate(vals) * R[static_cast<std::size_t>(k - 1)];
      CHECK(r[static_cast<std::size_t>(n - 1)] == rhs);
    }
  }
}

TEST_CASE("cumulants of an abstract convolution") {
  std::mt19937_64 rng(39);
  MomentConvolution mono = [](const MomentSeq& a, const MomentSeq& b) { return monotone_convolve(a, b); };
  MomentConvolution boolean = [](const MomentSeq& a, const MomentSeq& b) { return boolean_convolve(a, b); };
  Transform V = xform::Vtua{rat(1, 2), rat(1, 3), 2};
  MomentConvolution deformed = [&](const MomentSeq& a, const MomentSeq& b) { return deformed_convolve(V, a, b); };
  for (int s = 0; s < 6; ++s) {
    auto m = random_moments(rng, 6);
    CHECK(generic_cumulants(mono, m).r == monotone_cumulants(m).r);
    CHECK(generic_cumulants(boolean, m).r == boolean_cumulants(m).r);
    CHECK(generic_cumulants(deformed, m).r == cmonotone_cumulants(m, apply_transform(V, m)).r);
    CHECK(convolution_power(mono, m, 3) == monotone_power(m, 3));
  }
}

TEST_CASE("cumulant axioms") {
  std::mt19937_64 rng(40);
  std::vector<MomentSeq> samples;
  std::vector<std::pair<MomentSeq, MomentSeq>> pairs;
  for (int s = 0; s < 5; ++s) {
    samples.push_back(random_moments(rng, 6));
    pairs.emplace_back(random_moments(rng, 6), random_moments(rng, 6));
  }
  MomentConvolution mono = [](const MomentSeq& a, const MomentSeq& b) { return monotone_convolve(a, b); };
  CumulantExtractor r = [](const MomentSeq& m) { return monotone_cumulants(m).r; };
  CHECK(verify_axioms(r, mono, samples).all_passed());
  CHECK(verify_pair_axioms(pairs).all_passed());

  // additivity fails for an extractor that is not the cumulant sequence
  CumulantExtractor moments_only = [](const MomentSeq& m) { return m.values(); };
  CHECK(!verify_axioms(moments_only, mono, samples).all_passed());
}

TEST_CASE("H-expansion coefficients add in the first slot") {
  std::mt19937_64 rng(41);
  for (int s = 0; s < 15; ++s) {
    MomentPair p1{random_moments(rng, 6), random_moments(rng, 6)};
    MomentPair p2{random_moments(rng, 6), random_moments(rng, 6)};
    auto q = cmonotone_convolve(p1, p2);
    auto B = q.first.h_series(), B1 = p1.first.h_series(), B2 = p2.first.h_series();
    // H(z) = z + b_1 + b_2/z + ...; B holds these in w = 1/z
    CHECK(B[1] == B1[1] + B2[1]);
    CHECK(B[2] == B1[2] + B2[2]);
  }
}

TEST_CASE("pair semigroups obey the flow composition law") {
  std::mt19937_64 rng(42);
  for (int s = 0; s < 6; ++s) {
    auto rp = random_sequence(rng, 7), rs = random_sequence(rng, 7);
    auto at = [&](const Rational& t) { return MomentPair{moments_from_cmonotone(rp, rs, t), moments_from_monotone(rs, t)}; };
    for (auto [t, u] : {std::pair{rat(1, 2), rat(1, 3)}, std::pair{rat(2), rat(3, 4)}, std::pair{rat(-1, 5), rat(7, 5)}})
      CHECK(cmonotone_convolve(at(t), at(u)) == at(t + u));
  }
}
