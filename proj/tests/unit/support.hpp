#pragma once

#include "cmono/error.hpp"
#include "cmono/measures.hpp"
#include "cmono/rational.hpp"

#include <doctest.h>

#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace cmono::test {

inline std::vector<Rational> rats(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(parse_rational(t));
  return out;
}

inline MomentSeq moments(std::initializer_list<const char*> texts) { return MomentSeq(rats(texts)); }

inline AtomicMeasure atomic(std::initializer_list<std::pair<const char*, const char*>> atoms) {
  std::vector<Atom> v;
  for (auto [x, w] : atoms) v.push_back({parse_rational(x), parse_rational(w)});
  return AtomicMeasure(v);
}

inline AtomicMeasure bernoulli() { return atomic({{"-1", "1/2"}, {"1", "1/2"}}); }

inline MomentSeq random_moments(std::mt19937_64& rng, int K) { return moments_of_atomic(random_atomic(rng), K); }

// Arbitrary rationals, not necessarily moments of a measure.
inline std::vector<Rational> random_sequence(std::mt19937_64& rng, int K, int range = 3, int max_den = 3) {
  std::uniform_int_distribution<int> num(-range, range), den(1, max_den);
  std::vector<Rational> out;
  for (int i = 0; i < K; ++i) out.push_back(rat(num(rng), den(rng)));
  return out;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a cmono::Error");
  return ErrorCode::InvalidSpec;
}

}  // namespace cmono::test
