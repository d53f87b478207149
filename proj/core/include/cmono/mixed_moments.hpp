#pragma once

#include "cmono/rational.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace cmono {

// x_i^exponent for the single generator x_i of algebra i.
struct Letter {
  int algebra = 0;
  int exponent = 1;
  friend bool operator==(const Letter& a, const Letter& b) { return a.algebra == b.algebra && a.exponent == b.exponent; }
};

// A product of letters with adjacent letters from distinct algebras. Adjacent
// letters of the same algebra are merged on construction.
class Word {
 public:
  Word() = default;
  explicit Word(const std::vector<Letter>& letters);

  // "1^2 2^1 1^1"; a bare "2" means exponent 1.
  static Word parse(const std::string& text);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int degree() const;

  Word slice(std::size_t begin, std::size_t end) const;
  friend Word operator*(const Word& a, const Word& b);
  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }

  std::string str() const;

 private:
  std::vector<Letter> letters_;
};

// Moment tables of one self-adjoint generator: phi[n-1] = phi(x^n), likewise psi.
struct AlgebraSpec {
  int index = 0;
  std::vector<Rational> phi;
  std::vector<Rational> psi;
  int degree_cap() const { return static_cast<int>(std::min(phi.size(), psi.size())); }
};

struct PairValue {
  Rational phi;
  Rational psi;
  friend bool operator==(const PairValue& a, const PairValue& b) { return a.phi == b.phi && a.psi == b.psi; }
};

// Which rule to try first when several apply. The value must not depend on it.
struct ReductionOrder {
  bool left_end_first = true;
  bool first_interior_peak = true;
};

// (phi, psi) of the iterated product over the family (ordered by index), by the
// end-factoring and peak-splitting rules; psi by the monotone peak rule.
PairValue eval_pair(const Word& word, const std::vector<AlgebraSpec>& family, ReductionOrder order = {});

// Binary product trees: a node is (A_L, phi_L, psi_L) |> (A_R, phi_R, psi_R) with
// R the upper algebra. A node acts on words over the union of its leaves.
class ProductTree {
 public:
  struct Node;
  static ProductTree leaf(AlgebraSpec spec);
  static ProductTree product(const ProductTree& lower, const ProductTree& upper);
  static ProductTree fold_left(const std::vector<AlgebraSpec>& family);   // ((1 2) 3) ...
  static ProductTree fold_right(const std::vector<AlgebraSpec>& family);  // (1 (2 3)) ...

  PairValue eval(const Word& word, ReductionOrder order = {}) const;
  std::string str() const;

 private:
  explicit ProductTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Every alternating word over the given algebra indices with length <= max_length
// and exponents in 1..max_exponent.
std::vector<Word> alternating_words(const std::vector<int>& algebras, int max_length, int max_exponent);

struct WordMismatch {
  std::string word;
  std::string detail;
};

struct MixedMomentReport {
  int words_checked = 0;
  std::vector<WordMismatch> mismatches;
  bool passed() const { return mismatches.empty(); }
};

// Fold-left, fold-right and the direct rule evaluator agree on every alternating
// word over three algebras.
MixedMomentReport check_product_associativity(const std::vector<AlgebraSpec>& family, int max_length = 5,
                                              int max_exponent = 2);

// Every rule-choice order gives the same value.
MixedMomentReport check_reduction_order(const std::vector<AlgebraSpec>& family, int max_length = 5,
                                        int max_exponent = 2);

// (phi, psi) of (x_a + x_b)^n expanded into 2^n words.
PairValue sum_power(const AlgebraSpec& lower, const AlgebraSpec& upper, int n);

// Moments of x_1 + x_2 against the pair convolution moments, n <= n_max.
MixedMomentReport check_sum_moments(const AlgebraSpec& lower, const AlgebraSpec& upper, int n_max = 6);

// Same with phi of the upper algebra replaced by zero: the orthogonal convolution.
MixedMomentReport check_orthogonality(const AlgebraSpec& lower, const AlgebraSpec& upper, int n_max = 6);

// phi of x_1 y_1 x_2 ... y_{n-1} x_n (x from the lower algebra, y from the upper)
// by centring every y at psi(y) and summing over the subsets kept centred.
Rational centred_expansion_value(const Word& word, const AlgebraSpec& lower, const AlgebraSpec& upper);

// Tables with entries num/den, num in [-range, range], den in 1..3.
AlgebraSpec random_tables(std::mt19937_64& rng, int index, int degree, int range = 2);

}  // namespace cmono
