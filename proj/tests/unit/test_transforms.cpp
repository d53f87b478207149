#include "support.hpp"

#include "cmono/transforms.hpp"

#include <cmath>

using namespace cmono;
using namespace cmono::test;

namespace {

RationalMap shift(const Rational& a) { return RationalMap(Poly::z() - Poly(a)); }

std::vector<Complex> test_grid() {
  std::vector<Complex> g;
  for (int i = 0; i <= 12; ++i)
    for (double y : {0.5, 1.0, 2.0}) g.emplace_back(-3.0 + 0.5 * i, y);
  return g;
}

}  // namespace

TEST_CASE("H of atomic measures") {
  CHECK(h_of_atomic(AtomicMeasure::delta(rat(5, 2))) == shift(rat(5, 2)));
  CHECK(h_of_atomic(bernoulli()) == RationalMap(Poly(rats({"-1", "0", "1"})), Poly::z()));

  auto H = h_of_atomic(atomic({{"0", "1/4"}, {"2", "3/4"}}));
  Complex iy(0, 1e7);
  CHECK(std::abs(H(iy) / iy - 1.0) < 1e-6);
}

TEST_CASE("composition of rational maps") {
  CHECK(compose(shift(2), shift(-5)) == shift(-3));
  auto g = h_of_atomic(bernoulli());
  CHECK(compose(RationalMap::identity(), g) == g);
  CHECK(compose(g, RationalMap::identity()) == g);

  // Bernoulli monotone-convolved with itself: atoms at +-(1 +- sqrt 5)/2
  auto rec = measure_from_h(compose(g, g));
  CHECK(rec.atoms.size() == 4);
  CHECK(!rec.exact);
  CHECK(abs(rec.total_mass() - 1) < HighFloat(1e-12));
  // m4 = r4 + (3/2) r2^2 with r2 = 2, r4 = -1
  CHECK(moments_of_h(compose(g, g), 4) == moments({"0", "2", "0", "5"}));

  CHECK(code_of([&] { compose(g, g, 3); }) == ErrorCode::DegreeOverflow);
}

TEST_CASE("composition is associative") {
  std::mt19937_64 rng(21);
  for (int s = 0; s < 15; ++s) {
    auto a = h_of_atomic(random_atomic(rng));
    auto b = h_of_atomic(random_atomic(rng));
    auto c = h_of_atomic(random_atomic(rng));
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
  }
}

TEST_CASE("measure_from_h inverts h_of_atomic") {
  CHECK(measure_from_h(shift(3)).to_atomic() == AtomicMeasure::delta(3));
  CHECK(measure_from_h(h_of_atomic(bernoulli())).to_atomic() == bernoulli());
  std::mt19937_64 rng(22);
  for (int s = 0; s < 40; ++s) {
    auto mu = random_atomic(rng, 4, 3);
    auto rec = measure_from_h(h_of_atomic(mu));
    REQUIRE(rec.exact);
    CHECK(rec.to_atomic() == mu);
  }
  // (z^2 + 1)/z has no real zeros
  RationalMap complex_roots(Poly(rats({"1", "0", "1"})), Poly::z());
  CHECK(code_of([&] { measure_from_h(complex_roots); }) == ErrorCode::NotAProbabilityH);
  CHECK(!is_atomic_h(complex_roots));
  CHECK(is_atomic_h(h_of_atomic(bernoulli())));
}

TEST_CASE("reciprocal Cauchy transforms lift the imaginary part") {
  std::mt19937_64 rng(23);
  for (int s = 0; s < 20; ++s) {
    auto H = h_of_atomic(random_atomic(rng, 4));
    for (auto z : test_grid()) CHECK(H(z).imag() >= z.imag() - 1e-12);
  }
}

TEST_CASE("Nevanlinna and finite-variance forms") {
  auto F = finite_variance_of(shift(2));
  CHECK(F.a == -2);
  CHECK(F.rho_mass == 0);

  auto B = finite_variance_of(h_of_atomic(bernoulli()));
  CHECK(B.a == 0);
  CHECK(B.rho_mass == 1);
  REQUIRE(B.rho.size() == 1);
  CHECK(B.rho[0].exact_x.value() == 0);

  std::mt19937_64 rng(24);
  for (int s = 0; s < 20; ++s) {
    auto mu = random_atomic(rng, 4);
    auto H = h_of_atomic(mu);
    auto m = moments_of_atomic(mu, 2);
    auto fv = finite_variance_of(H);
    CHECK(fv.a == -m.mean());
    CHECK(fv.rho_mass == m.variance());
    auto nv = nevanlinna_of(H);
    for (auto z : test_grid()) {
      CHECK(std::abs(nv(z) - H(z)) < 1e-10);
      CHECK(std::abs(fv(z) - H(z)) < 1e-10);
    }
  }
}

TEST_CASE("branches of log and sqrt") {
  const double pi = std::acos(-1.0);
  CHECK(std::abs(sqrt_branch(Complex(-1, 0)) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(sqrt_branch(Complex(4, 1e-3)) - std::sqrt(Complex(4, 1e-3))) < 1e-12);
  // just below the positive axis the second branch is close to 2 pi
  CHECK(std::abs(log_branch2(Complex(1, -1e-6)).imag() - 2 * pi) < 1e-5);
  CHECK(std::abs(log_branch1(Complex(-1, 1e-6)).imag() - pi) < 1e-5);
  CHECK(code_of([] { log_branch1(Complex(-2, 0)); }) == ErrorCode::BranchCutHit);
  CHECK(code_of([] { log_branch2(Complex(3, 0)); }) == ErrorCode::BranchCutHit);
  auto z = AnalyticMap::z();
  CHECK(code_of([&] { log1(z)(Complex(-1, 0)); }) == ErrorCode::BranchCutHit);
}

TEST_CASE("Stieltjes inversion of the arcsine law") {
  const double pi = std::acos(-1.0);
  auto z = AnalyticMap::z();
  auto H = sqrt2(z * z - 2.0);
  ComplexFn G = [&](Complex w) { return 1.0 / H(w); };
  CHECK(std::abs(stieltjes_density(G, 0.0) - 1.0 / (pi * std::sqrt(2.0))) < 1e-6);
  for (double x : {0.3, -0.9, 1.2})
    CHECK(std::abs(stieltjes_density(G, x) - 1.0 / (pi * std::sqrt(2.0 - x * x))) < 1e-6);
  CHECK(std::abs(stieltjes_density(G, 2.0)) < 1e-8);
  CHECK(std::abs(stieltjes_density(G, -3.5)) < 1e-8);
}

TEST_CASE("atom location") {
  auto z = AnalyticMap::z();
  auto atoms = locate_atoms(z - 0.75, {{-0.25, 1.75}});
  REQUIRE(atoms.size() == 1);
  CHECK(atoms[0].x == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(atoms[0].w == doctest::Approx(1.0).epsilon(1e-8));

  // H of (delta_-1 + delta_1)/2 is z - 1/z: atoms at -1 and 1 with weight 1/2
  auto Hb = z - 1.0 / z;
  auto two = locate_atoms(Hb, {{-2, -0.5}, {0.5, 2}});
  REQUIRE(two.size() == 2);
  CHECK(two[0].x == doctest::Approx(-1.0));
  CHECK(two[1].w == doctest::Approx(0.5).epsilon(1e-8));

  CHECK(code_of([&] { locate_atoms(z - 0.75, {{2, 3}}); }) == ErrorCode::NoSignChange);
}
