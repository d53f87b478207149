#pragma once

#include "cmono/measures.hpp"
#include "cmono/mpoly.hpp"
#include "cmono/series.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cmono {

enum class Flavor { Monotone, Boolean, Free, CFreePair, CMonotonePair };

const char* flavor_name(Flavor f);
Flavor parse_flavor(const std::string& name);

// r[0] holds r_1. For pair flavors `companion` holds the single-measure
// cumulants of the second argument (monotone for c-monotone, free for c-free).
struct CumulantSeq {
  Flavor flavor = Flavor::Monotone;
  std::vector<Rational> r;
  std::vector<Rational> companion;

  int order() const { return static_cast<int>(r.size()); }
  const Rational& operator()(int n) const { return r.at(static_cast<std::size_t>(n - 1)); }
};

// ---------------------------------------------------------------------------
// Moment evolution polynomials m_n(t). With r_pair = r(mu,nu) and r_single = r(nu),
//   m_n' = sum_k (k+1) rs_{n-k} m_k - sum_k sum_l rs_{n-k} m_l m_{k-l}
//          + sum_k sum_l rp_{n-k} m_l m_{k-l},      m_0 = 1, m_n(0) = 0.
// Index conventions: r vectors hold r_1 at position 0; the result holds m_0..m_K.

namespace detail {

template <class R>
TPoly<R> evolution_rest(const std::vector<TPoly<R>>& m, const std::vector<TPoly<R>>& conv_sq,
                        const std::vector<R>& rp, const std::vector<R>& rs, int n) {
  TPoly<R> rest;
  for (int k = 1; k <= n - 1; ++k) {
    const R& s = rs[static_cast<std::size_t>(n - k - 1)];
    const R& p = rp[static_cast<std::size_t>(n - k - 1)];
    rest += m[static_cast<std::size_t>(k)].scaled(s * Rational(k + 1));
    rest += conv_sq[static_cast<std::size_t>(k)].scaled(p - s);
  }
  return rest;
}

template <class R>
TPoly<R> convolution_square(const std::vector<TPoly<R>>& m, int k) {
  TPoly<R> acc;
  for (int l = 0; l <= k; ++l) acc += m[static_cast<std::size_t>(l)] * m[static_cast<std::size_t>(k - l)];
  return acc;
}

}  // namespace detail

template <class R>
std::vector<TPoly<R>> moment_polynomials(const std::vector<R>& r_pair, const std::vector<R>& r_single, int K) {
  std::vector<TPoly<R>> m{TPoly<R>::constant(R(1))};
  std::vector<TPoly<R>> conv_sq{TPoly<R>::constant(R(1))};
  for (int n = 1; n <= K; ++n) {
    TPoly<R> rest = detail::evolution_rest(m, conv_sq, r_pair, r_single, n);
    TPoly<R> mn = rest.integral() + TPoly<R>(std::vector<R>{R(0), r_pair[static_cast<std::size_t>(n - 1)]});
    m.push_back(mn);
    conv_sq.push_back(detail::convolution_square(m, n));
  }
  return m;
}

// Solves for r(mu,nu) given the moments of mu (m_mu[0] = m_1) and r(nu), order by
// order, choosing r_n so that m_n(1) equals m_n(mu).
template <class R>
std::vector<R> solve_pair_cumulants(const std::vector<R>& m_mu, const std::vector<R>& r_single, int K) {
  std::vector<R> rp;
  std::vector<TPoly<R>> m{TPoly<R>::constant(R(1))};
  std::vector<TPoly<R>> conv_sq{TPoly<R>::constant(R(1))};
  for (int n = 1; n <= K; ++n) {
    rp.push_back(R(0));
    TPoly<R> rest = detail::evolution_rest(m, conv_sq, rp, r_single, n).integral();
    R rn = m_mu[static_cast<std::size_t>(n - 1)] - rest.at(Rational(1));
    rp.back() = rn;
    m.push_back(rest + TPoly<R>(std::vector<R>{R(0), rn}));
    conv_sq.push_back(detail::convolution_square(m, n));
  }
  return rp;
}

// Monotone cumulants: the diagonal case r(mu,mu).
template <class R>
std::vector<R> solve_monotone_cumulants(const std::vector<R>& m, int K) {
  std::vector<R> r;
  std::vector<TPoly<R>> mp{TPoly<R>::constant(R(1))};
  for (int n = 1; n <= K; ++n) {
    TPoly<R> rest;
    for (int k = 1; k <= n - 1; ++k)
      rest += mp[static_cast<std::size_t>(k)].scaled(r[static_cast<std::size_t>(n - k - 1)] * Rational(k + 1));
    rest = rest.integral();
    R rn = m[static_cast<std::size_t>(n - 1)] - rest.at(Rational(1));
    r.push_back(rn);
    mp.push_back(rest + TPoly<R>(std::vector<R>{R(0), rn}));
  }
  return r;
}

// c-free cumulants from the functional equations 1 - B_mu(w) = w Phi(w M_nu(w)),
// Phi(s) = sum_n R_n s^{n-1}. Inputs hold m_1..m_K.
template <class R>
std::vector<R> solve_cfree_cumulants(const std::vector<R>& m_mu, const std::vector<R>& m_nu, int K) {
  std::vector<R> mm{R(1)}, mn{R(1)};
  mm.insert(mm.end(), m_mu.begin(), m_mu.begin() + K);
  mn.insert(mn.end(), m_nu.begin(), m_nu.begin() + K);
  Series<R> M_mu(mm, K), M_nu(mn, K);
  Series<R> lhs = (Series<R>::constant(R(1), K) - M_mu.inverse()).divided_by_w();  // order K-1
  Series<R> s = M_nu.times_w();
  Series<R> s_inv = s.reversion();
  Series<R> phi = lhs.compose(s_inv.truncated(K - 1));
  std::vector<R> out;
  for (int n = 1; n <= K; ++n) out.push_back(phi[n - 1]);
  return out;
}

// Moments of the second slot from its free cumulants: M = 1/(1 - w Phi(w M)).
template <class R>
std::vector<R> moments_from_free_cumulants(const std::vector<R>& R_single, int K) {
  Series<R> phi(R_single, K);  // phi_n = R_{n+1}; order K (top unused)
  Series<R> one = Series<R>::constant(R(1), K);
  Series<R> M = one;
  for (int pass = 0; pass <= K; ++pass) {
    Series<R> inner = phi.compose(M.times_w());
    M = (one - inner.times_w()).inverse();
  }
  std::vector<R> out;
  for (int n = 1; n <= K; ++n) out.push_back(M[n]);
  return out;
}

// Moments of the first slot from R(mu,nu) and the moments of nu.
template <class R>
std::vector<R> moments_from_cfree_cumulants(const std::vector<R>& R_pair, const std::vector<R>& m_nu, int K) {
  std::vector<R> mn{R(1)};
  mn.insert(mn.end(), m_nu.begin(), m_nu.begin() + K);
  Series<R> M_nu(mn, K);
  Series<R> phi(R_pair, K);
  Series<R> one = Series<R>::constant(R(1), K);
  Series<R> B = one - phi.compose(M_nu.times_w()).times_w();
  Series<R> M = B.inverse();
  std::vector<R> out;
  for (int n = 1; n <= K; ++n) out.push_back(M[n]);
  return out;
}

// ---------------------------------------------------------------------------
// Rational front ends.

CumulantSeq cmonotone_cumulants(const MomentSeq& mu, const MomentSeq& nu);
CumulantSeq monotone_cumulants(const MomentSeq& m);
CumulantSeq boolean_cumulants(const MomentSeq& m);
CumulantSeq free_cumulants(const MomentSeq& m);

struct CFreeCumulants {
  std::vector<Rational> single;  // R_n(nu), free cumulants of nu
  std::vector<Rational> pair;    // R_n(mu,nu)
};
CFreeCumulants free_and_cfree_cumulants(const MomentSeq& mu, const MomentSeq& nu);

// Moments of mu_t where (mu_t, nu_t) is the semigroup with the given cumulants.
MomentSeq moments_from_cmonotone(const std::vector<Rational>& r_pair, const std::vector<Rational>& r_single,
                                 const Rational& t = Rational(1));
MomentSeq moments_from_monotone(const std::vector<Rational>& r, const Rational& t = Rational(1));
MomentSeq moments_from_boolean(const std::vector<Rational>& r);

// m_n(mu,nu,t) for n = 0..K.
std::vector<TPoly<Rational>> moment_polynomials(const MomentSeq& mu, const MomentSeq& nu);

// r_n = R_n + sum_{k=2}^{n-1} P_{n,k} R_k. Keys (n,k); values are polynomials in
// the formal moments of nu, variable formal::nu_moment(j) standing for m_j(nu).
struct CFreeRelation {
  int order = 0;
  std::map<std::pair<int, int>, MPoly> P;
  MPoly coefficient(int n, int k) const;
};
CFreeRelation cmonotone_vs_cfree(int K);

// Variables used by the formal-indeterminate computations.
namespace formal {
constexpr int kStride = 16;
inline int mu_moment(int n) { return n - 1; }            // m_n(mu)
inline int nu_moment(int n) { return kStride + n - 1; }  // m_n(nu)
std::string name(int var);
std::vector<MPoly> mu_moments(int K);
std::vector<MPoly> nu_moments(int K);
}  // namespace formal

// ---------------------------------------------------------------------------
// Cumulants of an abstract convolution, via r_n = d/dN m_n(mu^{N}) at N = 0.

using MomentConvolution = std::function<MomentSeq(const MomentSeq&, const MomentSeq&)>;

// The N-fold power mu^{N} = mu * mu^{N-1}, with mu^{0} = delta_0.
MomentSeq convolution_power(const MomentConvolution& conv, const MomentSeq& m, int N);

CumulantSeq generic_cumulants(const MomentConvolution& conv, const MomentSeq& m, Flavor label = Flavor::Monotone);

struct AxiomCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool all_passed() const;
};

// Cumulant extractor for a single distribution under some convolution.
using CumulantExtractor = std::function<std::vector<Rational>(const MomentSeq&)>;

// Power additivity (N <= max_power) over the samples, and homogeneity under
// dilation when `homogeneous` is set.
AxiomReport verify_axioms(const CumulantExtractor& r, const MomentConvolution& conv,
                          const std::vector<MomentSeq>& samples, int max_power = 5, bool homogeneous = true);

// Pair-cumulant axioms: additivity under the pair product, homogeneity, and the
// leading-term structure r_n = m_n(mu) + (terms in lower moments) checked on
// formal indeterminates; plus the Boolean-sum identities for r and R.
AxiomReport verify_pair_axioms(const std::vector<std::pair<MomentSeq, MomentSeq>>& samples, int max_power = 5);

}  // namespace cmono
