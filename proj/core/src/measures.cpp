#include "cmono/measures.hpp"

#include "cmono/cumulants.hpp"
#include "cmono/error.hpp"

#include <algorithm>

namespace cmono {

Rational MomentSeq::operator()(int n) const {
  if (n == 0) return Rational(1);
  if (n < 0 || n > order()) throw std::out_of_range("moment index " + std::to_string(n) + " beyond order");
  return m_[static_cast<std::size_t>(n - 1)];
}

Rational MomentSeq::mean() const { return order() >= 1 ? m_[0] : Rational(0); }

Rational MomentSeq::variance() const {
  if (order() < 2) fail(ErrorCode::InsufficientOrder, "variance needs two moments");
  return m_[1] - m_[0] * m_[0];
}

MomentSeq MomentSeq::truncated(int K) const {
  std::vector<Rational> v(m_.begin(), m_.begin() + std::min(K, order()));
  return MomentSeq(std::move(v));
}

Series<Rational> MomentSeq::generating_series() const {
  std::vector<Rational> c{Rational(1)};
  c.insert(c.end(), m_.begin(), m_.end());
  return Series<Rational>(std::move(c), order());
}

Series<Rational> MomentSeq::h_series() const { return generating_series().inverse(); }

MomentSeq MomentSeq::from_generating(const Series<Rational>& M) {
  std::vector<Rational> v;
  for (int n = 1; n <= M.order(); ++n) v.push_back(M[n]);
  return MomentSeq(std::move(v));
}

MomentSeq MomentSeq::from_h_series(const Series<Rational>& B) { return from_generating(B.inverse()); }

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) fail(ErrorCode::InvalidSpec, "atomic measure needs at least one atom");
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  Rational total(0);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].w <= 0) fail(ErrorCode::InvalidSpec, "atom weights must be positive");
    if (i > 0 && atoms_[i].x == atoms_[i - 1].x) fail(ErrorCode::InvalidSpec, "duplicate atom location " + to_string(atoms_[i].x));
    total += atoms_[i].w;
  }
  if (total != 1) fail(ErrorCode::InvalidSpec, "atom weights sum to " + to_string(total) + ", not 1");
}

AtomicMeasure AtomicMeasure::delta(const Rational& a) { return AtomicMeasure({{a, Rational(1)}}); }

bool operator==(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (a.atoms_.size() != b.atoms_.size()) return false;
  for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
    if (a.atoms_[i].x != b.atoms_[i].x || a.atoms_[i].w != b.atoms_[i].w) return false;
  }
  return true;
}

KestenLaw KestenLaw::from_sigma_r(const Rational& sigma2, const Rational& r) { return KestenLaw{r * sigma2, sigma2}; }

void validate(const NamedLaw& law) {
  std::visit(
      [](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ArcsineLaw>) {
          if (l.variance <= 0) fail(ErrorCode::InvalidSpec, "arcsine variance must be positive");
        } else if constexpr (std::is_same_v<T, KestenLaw>) {
          if (l.alpha2 <= 0 || l.beta2 <= 0) fail(ErrorCode::InvalidSpec, "Kesten parameters must be positive");
        } else if constexpr (std::is_same_v<T, MonotonePoissonLaw>) {
          if (l.rho <= 0) fail(ErrorCode::InvalidSpec, "Poisson rate must be positive");
        } else {
          if (l.scale <= 0) fail(ErrorCode::InvalidSpec, "Cauchy scale must be positive");
        }
      },
      law);
}

std::string describe(const NamedLaw& law) {
  return std::visit(
      [](const auto& l) -> std::string {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ArcsineLaw>) return "arcsine(var=" + to_string(l.variance) + ")";
        else if constexpr (std::is_same_v<T, KestenLaw>)
          return "kesten(alpha2=" + to_string(l.alpha2) + ",beta2=" + to_string(l.beta2) + ")";
        else if constexpr (std::is_same_v<T, MonotonePoissonLaw>) return "monotone-poisson(rho=" + to_string(l.rho) + ")";
        else return "cauchy(b=" + to_string(l.scale) + ")";
      },
      law);
}

MomentSeq moments_of_atomic(const AtomicMeasure& mu, int K) {
  if (K < 1) fail(ErrorCode::InvalidSpec, "order must be at least 1");
  std::vector<Rational> m(static_cast<std::size_t>(K), Rational(0));
  for (const auto& a : mu.atoms()) {
    Rational p = a.w;
    for (int n = 1; n <= K; ++n) {
      p *= a.x;
      m[static_cast<std::size_t>(n - 1)] += p;
    }
  }
  return MomentSeq(std::move(m));
}

namespace {

// sqrt(1 - 2 v w^2), i.e. H(z)/z for the arcsine law of variance v.
Series<Rational> arcsine_h_series(const Rational& v, int K) {
  Series<Rational> inside = Series<Rational>::constant(Rational(1), K);
  if (K >= 2) inside[2] = Rational(-2) * v;
  return inside.sqrt_unit();
}

}  // namespace

MomentSeq arcsine_moments(const Rational& variance, int K) {
  return MomentSeq::from_h_series(arcsine_h_series(variance, K));
}

MomentSeq moments_of_named(const NamedLaw& law, int K) {
  validate(law);
  if (K < 1) fail(ErrorCode::InvalidSpec, "order must be at least 1");
  return std::visit(
      [K](const auto& l) -> MomentSeq {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, ArcsineLaw>) {
          return arcsine_moments(l.variance, K);
        } else if constexpr (std::is_same_v<T, KestenLaw>) {
          // H = (1 - r) z + r sqrt(z^2 - 2 beta2)
          Rational r = l.r();
          Series<Rational> B = arcsine_h_series(l.beta2, K) * r + Series<Rational>::constant(1 - r, K);
          return MomentSeq::from_h_series(B);
        } else if constexpr (std::is_same_v<T, MonotonePoissonLaw>) {
          return moments_from_monotone(std::vector<Rational>(static_cast<std::size_t>(K), l.rho));
        } else {
          fail(ErrorCode::CauchyHasNoMoments, "the Cauchy law has no moments");
        }
      },
      law);
}

MomentSeq moments_of(const MeasureSpec& spec, int K) {
  if (const auto* a = std::get_if<AtomicMeasure>(&spec)) return moments_of_atomic(*a, K);
  return moments_of_named(std::get<NamedLaw>(spec), K);
}

AtomicMeasure dilate(const AtomicMeasure& mu, const Rational& lambda) {
  if (lambda <= 0) fail(ErrorCode::NonpositiveScale, "dilation factor must be positive");
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({a.x * lambda, a.w});
  return AtomicMeasure(std::move(atoms));
}

MomentSeq dilate(const MomentSeq& m, const Rational& lambda) {
  if (lambda <= 0) fail(ErrorCode::NonpositiveScale, "dilation factor must be positive");
  std::vector<Rational> v = m.values();
  Rational p(1);
  for (auto& x : v) {
    p *= lambda;
    x *= p;
  }
  return MomentSeq(std::move(v));
}

AtomicMeasure random_atomic(std::mt19937_64& rng, int max_atoms, int span) {
  std::vector<int> halves;
  for (int k = -2 * span; k <= 2 * span; ++k) halves.push_back(k);
  std::shuffle(halves.begin(), halves.end(), rng);
  std::uniform_int_distribution<int> count(1, std::max(1, std::min(max_atoms, static_cast<int>(halves.size())))), weight(1, 4);
  int n = count(rng);
  std::vector<Atom> atoms;
  Rational total(0);
  for (int i = 0; i < n; ++i) {
    Rational w(weight(rng));
    atoms.push_back({rat(halves[static_cast<std::size_t>(i)], 2), w});
    total += w;
  }
  for (auto& a : atoms) a.w /= total;
  return AtomicMeasure(std::move(atoms));
}

}  // namespace cmono
