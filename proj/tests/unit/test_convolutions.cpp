#include "support.hpp"

#include "cmono/convolutions.hpp"
#include "cmono/cumulants.hpp"

using namespace cmono;
using namespace cmono::test;

namespace {

const RationalMap kIdentityH = RationalMap::identity();  // H of delta_0

std::vector<Transform> all_transforms() {
  return {xform::Identity{}, xform::ToDelta0{}, xform::Ut{rat(2, 3)}, xform::Vtua{rat(1, 2), rat(1, 3), 2},
          xform::Vtua{0, 1, rat(-1, 2)}, xform::Fu{rat(3, 4)}, xform::XiT{rat(1, 2)}};
}

std::vector<Complex> grid() {
  std::vector<Complex> g;
  for (int i = 0; i <= 8; ++i)
    for (double y : {0.5, 1.0, 2.0}) g.emplace_back(-2.0 + 0.5 * i, y);
  return g;
}

}  // namespace

TEST_CASE("point masses add under the single-measure convolutions") {
  auto a = AtomicMeasure::delta(rat(1, 2)), b = AtomicMeasure::delta(rat(-3));
  CHECK(monotone_convolve(a, b).to_atomic() == AtomicMeasure::delta(rat(-5, 2)));
  CHECK(boolean_convolve(a, b).to_atomic() == AtomicMeasure::delta(rat(-5, 2)));
}

TEST_CASE("Bernoulli convolved with itself") {
  auto m = moments_of_atomic(bernoulli(), 4);
  CHECK(monotone_convolve(m, m) == moments({"0", "2", "0", "5"}));
  // H = 2z - 2/z - z: atoms at +-sqrt 2 with weight 1/2
  CHECK(boolean_convolve(m, m) == moments({"0", "2", "0", "4"}));
  auto rec = boolean_convolve(bernoulli(), bernoulli());
  CHECK(rec.atoms.size() == 2);
}

TEST_CASE("orthogonal convolution") {
  std::mt19937_64 rng(51);
  auto d0 = moments_of_atomic(AtomicMeasure::delta(0), 6);
  for (int s = 0; s < 15; ++s) {
    auto mu = random_atomic(rng), nu = random_atomic(rng);
    auto Hmu = h_of_atomic(mu), Hnu = h_of_atomic(nu);
    CHECK(orthogonal_convolve(Hmu, kIdentityH) == Hmu);
    CHECK(orthogonal_convolve(kIdentityH, Hnu) == kIdentityH);
    CHECK(boolean_convolve(orthogonal_convolve(Hmu, Hnu), Hnu) == monotone_convolve(Hmu, Hnu));

    auto mm = moments_of_atomic(mu, 6), mn = moments_of_atomic(nu, 6);
    CHECK(orthogonal_convolve(mm, d0) == mm);
    CHECK(boolean_convolve(orthogonal_convolve(mm, mn), mn) == monotone_convolve(mm, mn));
    CHECK(orthogonal_convolve(mm, mn).mean() == mm.mean());
    CHECK(orthogonal_convolve(mm, mn)(2) == mm(2));
  }
}

TEST_CASE("rational and series tracks agree") {
  std::mt19937_64 rng(52);
  for (int s = 0; s < 15; ++s) {
    auto mu = random_atomic(rng), nu = random_atomic(rng);
    auto Hmu = h_of_atomic(mu), Hnu = h_of_atomic(nu);
    auto mm = moments_of_atomic(mu, 8), mn = moments_of_atomic(nu, 8);
    CHECK(moments_of_h(monotone_convolve(Hmu, Hnu), 8) == monotone_convolve(mm, mn));
    CHECK(moments_of_h(boolean_convolve(Hmu, Hnu), 8) == boolean_convolve(mm, mn));
    CHECK(moments_of_h(orthogonal_convolve(Hmu, Hnu), 8) == orthogonal_convolve(mm, mn));
    auto pr = cmonotone_convolve(HPair{Hmu, Hnu}, HPair{Hnu, Hmu});
    auto ps = cmonotone_convolve(MomentPair{mm, mn}, MomentPair{mn, mm});
    CHECK(moments_of_h(pr.first, 8) == ps.first);
    CHECK(moments_of_h(pr.second, 8) == ps.second);
    CHECK(abs(monotone_convolve(mu, nu).total_mass() - 1) < HighFloat(1e-12));
  }
}

TEST_CASE("c-monotone product special cases") {
  std::mt19937_64 rng(53);
  for (int s = 0; s < 15; ++s) {
    auto Hmu = h_of_atomic(random_atomic(rng)), Hnu = h_of_atomic(random_atomic(rng));
    auto mono = monotone_convolve(Hmu, Hnu);
    CHECK(cmonotone_convolve(HPair{Hmu, Hmu}, HPair{Hnu, Hnu}) == (HPair{mono, mono}));
    CHECK(cmonotone_convolve(HPair{Hmu, kIdentityH}, HPair{Hnu, kIdentityH}) ==
          (HPair{boolean_convolve(Hmu, Hnu), kIdentityH}));
    CHECK(cmonotone_convolve(HPair{Hmu, Hmu}, HPair{kIdentityH, Hnu}) == (HPair{orthogonal_convolve(Hmu, Hnu), mono}));
  }
}

TEST_CASE("c-monotone product is associative") {
  std::mt19937_64 rng(54);
  for (int s = 0; s < 8; ++s) {
    HPair p[3];
    for (auto& q : p) q = HPair{h_of_atomic(random_atomic(rng)), h_of_atomic(random_atomic(rng))};
    CHECK(cmonotone_convolve(cmonotone_convolve(p[0], p[1]), p[2]) ==
          cmonotone_convolve(p[0], cmonotone_convolve(p[1], p[2])));
  }
}

TEST_CASE("c-free product special cases") {
  std::mt19937_64 rng(55);
  auto d0 = moments_of_atomic(AtomicMeasure::delta(0), 7);
  for (int s = 0; s < 10; ++s) {
    auto mu = random_moments(rng, 7), nu = random_moments(rng, 7);
    auto diag = cfree_convolve({mu, mu}, {nu, nu});
    CHECK(diag.first == diag.second);
    // free cumulants add in the second slot
    auto Rs = free_cumulants(diag.second).r, R1 = free_cumulants(mu).r, R2 = free_cumulants(nu).r;
    for (int n = 0; n < 7; ++n) CHECK(Rs[static_cast<std::size_t>(n)] == R1[static_cast<std::size_t>(n)] + R2[static_cast<std::size_t>(n)]);

    CHECK(cfree_convolve({mu, d0}, {nu, d0}) == (MomentPair{boolean_convolve(mu, nu), d0}));
    CHECK(cfree_convolve({mu, d0}, {nu, nu}) == (MomentPair{monotone_convolve(mu, nu), nu}));
  }
}

TEST_CASE("Boolean powers and kappa") {
  std::mt19937_64 rng(56);
  auto d0 = moments_of_atomic(AtomicMeasure::delta(0), 6);
  for (int s = 0; s < 10; ++s) {
    auto mu = random_moments(rng, 6), nu = random_moments(rng, 6);
    CHECK(boolean_power(mu, 1) == mu);
    CHECK(boolean_power(mu, 0) == d0);
    CHECK(boolean_power(mu, 2) == boolean_convolve(mu, mu));
    CHECK(boolean_power(boolean_power(mu, rat(1, 3)), 3) == mu);
    CHECK(kappa(1, 1, mu, nu) == boolean_convolve(mu, nu));
    CHECK(kappa(rat(1, 2), 0, mu, nu) == boolean_power(mu, rat(1, 2)));
    CHECK(monotone_power(mu, 3) == monotone_convolve(monotone_convolve(mu, mu), mu));
    auto H = h_of_atomic(random_atomic(rng));
    CHECK(boolean_power(H, 2) == boolean_convolve(H, H));
  }
}

TEST_CASE("deformed convolutions reduce to the classical ones") {
  std::mt19937_64 rng(57);
  for (int s = 0; s < 10; ++s) {
    auto mu = random_moments(rng, 6), nu = random_moments(rng, 6);
    CHECK(deformed_convolve(xform::Identity{}, mu, nu) == monotone_convolve(mu, nu));
    CHECK(deformed_convolve(xform::ToDelta0{}, mu, nu) == boolean_convolve(mu, nu));
    CHECK(deformed_convolve(xform::Ut{1}, mu, nu) == monotone_convolve(mu, nu));
    CHECK(deformed_convolve(xform::Ut{0}, mu, nu) == boolean_convolve(mu, nu));
    CHECK(deformed_convolve(xform::Vtua{1, 1, 0}, mu, nu) == monotone_convolve(mu, nu));
    auto Hmu = h_of_atomic(random_atomic(rng)), Hnu = h_of_atomic(random_atomic(rng));
    CHECK(deformed_convolve(xform::Ut{rat(1, 3)}, Hmu, Hnu) ==
          monotone_convolve(Hmu, apply_transform(xform::Ut{rat(1, 3)}, Hnu)) + Hnu -
              apply_transform(xform::Ut{rat(1, 3)}, Hnu));
  }
}

TEST_CASE("mean and variance add under every deformed convolution") {
  std::mt19937_64 rng(58);
  for (const auto& T : all_transforms()) {
    for (int s = 0; s < 10; ++s) {
      auto mu = random_moments(rng, 4), nu = random_moments(rng, 4);
      auto c = deformed_convolve(T, mu, nu);
      CHECK(c.mean() == mu.mean() + nu.mean());
      CHECK(c.variance() == mu.variance() + nu.variance());
    }
  }
}

TEST_CASE("transforms act on mean and variance") {
  std::mt19937_64 rng(59);
  for (int s = 0; s < 10; ++s) {
    auto mu = random_moments(rng, 6);
    xform::Vtua v{rat(3, 2), rat(-1, 2), rat(1, 3)};
    auto Vm = apply_transform(v, mu);
    CHECK(Vm.mean() == v.u * mu.mean() - v.a * mu.variance());
    CHECK(Vm.variance() == v.t * mu.variance());

    auto Fm = apply_transform(xform::Fu{rat(3, 4)}, mu);
    CHECK(Fm == moments_of_atomic(AtomicMeasure::delta(rat(3, 4) * mu.mean()), 6));

    auto Xm = apply_transform(xform::XiT{rat(1, 2)}, mu);
    CHECK(Xm == arcsine_moments(rat(1, 2) * mu.variance(), 6));

    auto Um = apply_transform(xform::Ut{rat(1, 4)}, mu);
    CHECK(Um.mean() == rat(1, 4) * mu.mean());
  }
  CHECK(code_of([] { transform_b(xform::XiT{1}, moments({"1"})); }) == ErrorCode::TransformInapplicable);
  CHECK(code_of([] { apply_transform(xform::XiT{1}, h_of_atomic(bernoulli())); }) ==
        ErrorCode::TransformInapplicable);
}

TEST_CASE("transform parsing") {
  for (const auto& T : all_transforms()) CHECK(describe(parse_transform(describe(T))) == describe(T));
  CHECK(std::holds_alternative<xform::Identity>(parse_transform("mono")));
  CHECK(std::holds_alternative<xform::ToDelta0>(parse_transform("bool")));
  CHECK(code_of([] { parse_transform("V:1,2"); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { parse_transform("V:-1,2,0"); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { parse_transform("W:1"); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("associativity of deformed convolutions") {
  std::mt19937_64 rng(60);
  std::vector<MomentSeq> samples;
  for (int s = 0; s < 6; ++s) samples.push_back(random_moments(rng, 6));
  for (const auto& T : all_transforms()) CHECK(check_T_associativity(T, samples).passed());
  xform::XiGeneral third{[](const MomentSeq& m) { return m(3); }, "m3"};
  CHECK(!check_T_associativity(third, samples).passed());
}

TEST_CASE("algebra of V transforms") {
  CHECK(compose(xform::Vtua{2, 1, 0}, xform::Vtua{3, 1, 0}) == (xform::Vtua{6, 1, 0}));
  xform::Vtua v{rat(2, 3), rat(5, 2), rat(1, 2)}, w{rat(1, 2), rat(1, 3), 2};
  CHECK(compose(w, v) == (xform::Vtua{w.t * v.t, w.u * v.u, w.u * v.a + w.a * v.t}));
  CHECK(compose(v, invert(v)) == (xform::Vtua{1, 1, 0}));
  CHECK(compose(invert(v), v) == (xform::Vtua{1, 1, 0}));
  CHECK(code_of([] { invert(xform::Vtua{0, 1, 0}); }) == ErrorCode::NotInvertible);
  CHECK(code_of([] { invert(xform::Vtua{1, 0, 0}); }) == ErrorCode::NotInvertible);

  auto mu = atomic({{"-1", "1/4"}, {"1/2", "1/2"}, {"2", "1/4"}});
  CHECK(transform_grid_residual({w, v}, {compose(w, v)}, mu, grid()) < 1e-12);
  CHECK(transform_grid_residual({v, invert(v)}, {xform::Identity{}}, mu, grid()) < 1e-12);
  CHECK(transform_grid_residual({w}, {v}, mu, grid()) > 1e-3);
}

TEST_CASE("cone membership and closure") {
  CHECK(in_positive_cone(h_of_atomic(atomic({{"0", "1/2"}, {"3", "1/2"}}))));
  CHECK(!in_positive_cone(h_of_atomic(bernoulli())));
  CHECK(in_symmetric_cone(h_of_atomic(bernoulli())));
  CHECK(!in_symmetric_cone(h_of_atomic(atomic({{"0", "1/2"}, {"3", "1/2"}}))));

  CHECK(cone_criterion({1, 2, 0}, Cone::Positive));
  CHECK(!cone_criterion({2, 1, 0}, Cone::Positive));
  CHECK(!cone_criterion({1, 1, 1}, Cone::Positive));
  CHECK(cone_criterion({3, 1, 0}, Cone::Symmetric));
  CHECK(!cone_criterion({1, 1, rat(1, 2)}, Cone::Symmetric));

  auto pos = check_cone_preservation({1, 2, 0}, Cone::Positive, 60, 7);
  CHECK(pos.violations == 0);
  CHECK(pos.matches_prediction());
  auto neg = check_cone_preservation({1, 1, 1}, Cone::Positive, 60, 7);
  CHECK(neg.violations > 0);
  CHECK(!neg.example.empty());
  auto sym = check_cone_preservation({rat(1, 2), 3, 0}, Cone::Symmetric, 60, 7);
  CHECK(sym.violations == 0);
  auto asym = check_cone_preservation({1, 1, 1}, Cone::Symmetric, 60, 7);
  CHECK(asym.violations > 0);
}
