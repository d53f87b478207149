#include "cmono/mixed_moments.hpp"

#include "cmono/convolutions.hpp"
#include "cmono/error.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace cmono {

// ---------------------------------------------------------------------------
// Words

Word::Word(const std::vector<Letter>& letters) {
  for (const auto& l : letters) {
    if (l.exponent < 1) fail(ErrorCode::MalformedWord, "exponent must be >= 1");
    if (l.algebra < 0) fail(ErrorCode::MalformedWord, "algebra index must be >= 0");
    if (!letters_.empty() && letters_.back().algebra == l.algebra)
      letters_.back().exponent += l.exponent;
    else
      letters_.push_back(l);
  }
}

Word Word::parse(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  std::vector<Letter> out;
  while (in >> tok) {
    auto caret = tok.find('^');
    try {
      std::size_t used = 0;
      Letter l;
      std::string a = tok.substr(0, caret);
      l.algebra = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(tok);
      if (caret != std::string::npos) {
        std::string e = tok.substr(caret + 1);
        l.exponent = std::stoi(e, &used);
        if (used != e.size()) throw std::invalid_argument(tok);
      }
      out.push_back(l);
    } catch (const std::logic_error&) {
      fail(ErrorCode::MalformedWord, "cannot read letter '" + tok + "'");
    }
  }
  return Word(out);
}

int Word::degree() const {
  int d = 0;
  for (const auto& l : letters_) d += l.exponent;
  return d;
}

Word Word::slice(std::size_t begin, std::size_t end) const {
  return Word(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(begin),
                                  letters_.begin() + static_cast<std::ptrdiff_t>(end)));
}

Word operator*(const Word& a, const Word& b) {
  std::vector<Letter> all = a.letters_;
  all.insert(all.end(), b.letters_.begin(), b.letters_.end());
  return Word(all);
}

std::string Word::str() const {
  std::string s;
  for (const auto& l : letters_) {
    if (!s.empty()) s += ' ';
    s += std::to_string(l.algebra) + "^" + std::to_string(l.exponent);
  }
  return s;
}

namespace {

const AlgebraSpec& find_algebra(const std::vector<AlgebraSpec>& family, int index) {
  for (const auto& a : family)
    if (a.index == index) return a;
  fail(ErrorCode::MalformedWord, "word references unknown algebra " + std::to_string(index));
}

PairValue table_value(const AlgebraSpec& a, int exponent) {
  if (exponent > a.degree_cap())
    fail(ErrorCode::InsufficientOrder, "algebra " + std::to_string(a.index) + " has tables only to degree " +
                                           std::to_string(a.degree_cap()));
  auto k = static_cast<std::size_t>(exponent - 1);
  return {a.phi[k], a.psi[k]};
}

// Direct evaluation from the independence rules over a linearly ordered family.
class DirectEvaluator {
 public:
  DirectEvaluator(const std::vector<AlgebraSpec>& family, ReductionOrder order) : family_(family), order_(order) {}

  Rational phi(const Word& w) {
    if (w.empty()) return Rational(1);
    std::string key = w.str();
    if (auto it = phi_memo_.find(key); it != phi_memo_.end()) return it->second;
    Rational v = phi_uncached(w);
    phi_memo_.emplace(key, v);
    return v;
  }

  // Monotone rule: a letter above both neighbours factors out.
  Rational psi(const Word& w) {
    if (w.empty()) return Rational(1);
    const auto& L = w.letters();
    std::size_t n = L.size();
    if (n == 1) return value(L[0]).psi;
    for (std::size_t j = 0; j < n; ++j) {
      bool above_left = j == 0 || L[j].algebra > L[j - 1].algebra;
      bool above_right = j + 1 == n || L[j].algebra > L[j + 1].algebra;
      if (above_left && above_right) return value(L[j]).psi * psi(w.slice(0, j) * w.slice(j + 1, n));
    }
    fail(ErrorCode::MalformedWord, "no peak in " + w.str());
  }

 private:
  PairValue value(const Letter& l) { return table_value(find_algebra(family_, l.algebra), l.exponent); }

  Rational phi_uncached(const Word& w) {
    const auto& L = w.letters();
    std::size_t n = L.size();
    if (n == 1) return value(L[0]).phi;
    bool left = L[0].algebra > L[1].algebra;
    bool right = L[n - 1].algebra > L[n - 2].algebra;
    if (left && (order_.left_end_first || !right)) return value(L[0]).phi * phi(w.slice(1, n));
    if (right) return phi(w.slice(0, n - 1)) * value(L[n - 1]).phi;
    std::vector<std::size_t> peaks;
    for (std::size_t j = 1; j + 1 < n; ++j)
      if (L[j].algebra > L[j - 1].algebra && L[j].algebra > L[j + 1].algebra) peaks.push_back(j);
    std::size_t j = order_.first_interior_peak ? peaks.front() : peaks.back();
    PairValue b = value(L[j]);
    return (b.phi - b.psi) * phi(w.slice(0, j)) * phi(w.slice(j + 1, n)) +
           b.psi * phi(w.slice(0, j) * w.slice(j + 1, n));
  }

  const std::vector<AlgebraSpec>& family_;
  ReductionOrder order_;
  std::map<std::string, Rational> phi_memo_;
};

}  // namespace

PairValue eval_pair(const Word& word, const std::vector<AlgebraSpec>& family, ReductionOrder order) {
  DirectEvaluator ev(family, order);
  return {ev.phi(word), ev.psi(word)};
}

// ---------------------------------------------------------------------------
// Product trees

struct ProductTree::Node {
  std::optional<AlgebraSpec> leaf;
  std::shared_ptr<const Node> lower, upper;
  std::set<int> indices;
};

ProductTree ProductTree::leaf(AlgebraSpec spec) {
  auto n = std::make_shared<Node>();
  n->indices.insert(spec.index);
  n->leaf = std::move(spec);
  return ProductTree(n);
}

ProductTree ProductTree::product(const ProductTree& lower, const ProductTree& upper) {
  auto n = std::make_shared<Node>();
  n->lower = lower.node_;
  n->upper = upper.node_;
  n->indices = lower.node_->indices;
  for (int i : upper.node_->indices) {
    if (!n->indices.insert(i).second) fail(ErrorCode::MalformedWord, "algebra appears twice in a product");
  }
  return ProductTree(n);
}

ProductTree ProductTree::fold_left(const std::vector<AlgebraSpec>& family) {
  if (family.empty()) fail(ErrorCode::InvalidSpec, "empty family");
  ProductTree t = leaf(family[0]);
  for (std::size_t i = 1; i < family.size(); ++i) t = product(t, leaf(family[i]));
  return t;
}

ProductTree ProductTree::fold_right(const std::vector<AlgebraSpec>& family) {
  if (family.empty()) fail(ErrorCode::InvalidSpec, "empty family");
  ProductTree t = leaf(family.back());
  for (std::size_t i = family.size() - 1; i-- > 0;) t = product(leaf(family[i]), t);
  return t;
}

namespace {

class TreeEvaluator {
 public:
  explicit TreeEvaluator(ReductionOrder order) : order_(order) {}

  PairValue eval(const ProductTree::Node* node, const Word& w) {
    if (w.empty()) return {Rational(1), Rational(1)};
    auto& memo = memo_[node];
    std::string key = w.str();
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    PairValue v = node->leaf ? eval_leaf(*node->leaf, w) : PairValue{phi_product(node, w), psi_product(node, w)};
    memo.emplace(key, v);
    return v;
  }

 private:
  struct Segment {
    bool upper;
    Word word;
  };

  static PairValue eval_leaf(const AlgebraSpec& a, const Word& w) {
    if (w.size() != 1 || w.letters()[0].algebra != a.index)
      fail(ErrorCode::MalformedWord, "word " + w.str() + " is not in algebra " + std::to_string(a.index));
    return table_value(a, w.letters()[0].exponent);
  }

  static std::vector<Segment> split(const ProductTree::Node* node, const Word& w) {
    std::vector<Segment> segs;
    std::vector<Letter> run;
    bool run_upper = false;
    for (const auto& l : w.letters()) {
      bool up = node->upper->indices.count(l.algebra) > 0;
      if (!up && node->lower->indices.count(l.algebra) == 0)
        fail(ErrorCode::MalformedWord, "letter from algebra " + std::to_string(l.algebra) + " outside the product");
      if (!run.empty() && up != run_upper) {
        segs.push_back({run_upper, Word(run)});
        run.clear();
      }
      run_upper = up;
      run.push_back(l);
    }
    if (!run.empty()) segs.push_back({run_upper, Word(run)});
    return segs;
  }

  static Word join(const std::vector<Segment>& segs, std::size_t begin, std::size_t end) {
    Word w;
    for (std::size_t i = begin; i < end; ++i) w = w * segs[i].word;
    return w;
  }

  Rational phi_product(const ProductTree::Node* node, const Word& w) {
    auto segs = split(node, w);
    std::size_t n = segs.size();
    const Node* lo = node->lower.get();
    const Node* up = node->upper.get();
    if (n == 1) return eval(segs[0].upper ? up : lo, segs[0].word).phi;
    bool left = segs.front().upper, right = segs.back().upper;
    if (left && (order_.left_end_first || !right)) return eval(up, segs[0].word).phi * eval(node, join(segs, 1, n)).phi;
    if (right) return eval(node, join(segs, 0, n - 1)).phi * eval(up, segs[n - 1].word).phi;
    // lower ... lower with upper runs at odd positions
    std::size_t j = order_.first_interior_peak ? 1 : n - 2;
    PairValue b = eval(up, segs[j].word);
    Word before = join(segs, 0, j), after = join(segs, j + 1, n);
    return (b.phi - b.psi) * eval(node, before).phi * eval(node, after).phi + b.psi * eval(node, before * after).phi;
  }

  Rational psi_product(const ProductTree::Node* node, const Word& w) {
    Rational acc(1);
    Word lower_part;
    for (const auto& s : split(node, w)) {
      if (s.upper)
        acc *= eval(node->upper.get(), s.word).psi;
      else
        lower_part = lower_part * s.word;
    }
    return acc * eval(node->lower.get(), lower_part).psi;
  }

  using Node = ProductTree::Node;
  ReductionOrder order_;
  std::map<const Node*, std::map<std::string, PairValue>> memo_;
};

std::string pair_str(const PairValue& v) { return "(" + to_string(v.phi) + ", " + to_string(v.psi) + ")"; }

}  // namespace

PairValue ProductTree::eval(const Word& word, ReductionOrder order) const {
  TreeEvaluator ev(order);
  return ev.eval(node_.get(), word);
}

std::string ProductTree::str() const {
  std::function<std::string(const Node*)> rec = [&](const Node* n) -> std::string {
    if (n->leaf) return std::to_string(n->leaf->index);
    return "(" + rec(n->lower.get()) + " " + rec(n->upper.get()) + ")";
  };
  return rec(node_.get());
}

// ---------------------------------------------------------------------------
// Checks

std::vector<Word> alternating_words(const std::vector<int>& algebras, int max_length, int max_exponent) {
  std::vector<Word> out;
  std::vector<Letter> cur;
  std::function<void()> rec = [&]() {
    if (!cur.empty()) out.emplace_back(cur);
    if (static_cast<int>(cur.size()) == max_length) return;
    for (int a : algebras) {
      if (!cur.empty() && cur.back().algebra == a) continue;
      for (int e = 1; e <= max_exponent; ++e) {
        cur.push_back({a, e});
        rec();
        cur.pop_back();
      }
    }
  };
  rec();
  return out;
}

namespace {

std::vector<int> indices_of(const std::vector<AlgebraSpec>& family) {
  std::vector<int> idx;
  for (const auto& a : family) idx.push_back(a.index);
  return idx;
}

std::vector<AlgebraSpec> sorted_family(std::vector<AlgebraSpec> family) {
  std::sort(family.begin(), family.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  return family;
}

}  // namespace

MixedMomentReport check_product_associativity(const std::vector<AlgebraSpec>& family_in, int max_length,
                                              int max_exponent) {
  auto family = sorted_family(family_in);
  ProductTree left = ProductTree::fold_left(family), right = ProductTree::fold_right(family);
  DirectEvaluator direct(family, {});
  MixedMomentReport rep;
  for (const auto& w : alternating_words(indices_of(family), max_length, max_exponent)) {
    PairValue a = left.eval(w), b = right.eval(w);
    PairValue c{direct.phi(w), direct.psi(w)};
    ++rep.words_checked;
    if (!(a == b) || !(a == c))
      rep.mismatches.push_back({w.str(), "left " + pair_str(a) + " right " + pair_str(b) + " direct " + pair_str(c)});
  }
  return rep;
}

MixedMomentReport check_reduction_order(const std::vector<AlgebraSpec>& family_in, int max_length, int max_exponent) {
  auto family = sorted_family(family_in);
  std::vector<ReductionOrder> orders = {{true, true}, {true, false}, {false, true}, {false, false}};
  ProductTree left = ProductTree::fold_left(family), right = ProductTree::fold_right(family);
  MixedMomentReport rep;
  for (const auto& w : alternating_words(indices_of(family), max_length, max_exponent)) {
    ++rep.words_checked;
    PairValue ref = eval_pair(w, family, orders[0]);
    for (const auto& o : orders) {
      PairValue d = eval_pair(w, family, o), l = left.eval(w, o), r = right.eval(w, o);
      if (!(d == ref) || !(l == ref) || !(r == ref)) {
        rep.mismatches.push_back({w.str(), "order (" + std::to_string(o.left_end_first) + "," +
                                               std::to_string(o.first_interior_peak) + ") gives " + pair_str(d)});
        break;
      }
    }
  }
  return rep;
}

PairValue sum_power(const AlgebraSpec& lower, const AlgebraSpec& upper, int n) {
  std::vector<AlgebraSpec> family = sorted_family({lower, upper});
  DirectEvaluator ev(family, {});
  PairValue acc{Rational(0), Rational(0)};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Letter> letters;
    for (int k = 0; k < n; ++k) letters.push_back({((mask >> k) & 1) ? upper.index : lower.index, 1});
    Word w(letters);
    acc.phi += ev.phi(w);
    acc.psi += ev.psi(w);
  }
  return acc;
}

namespace {

MomentSeq phi_moments(const AlgebraSpec& a, int n) {
  return MomentSeq(std::vector<Rational>(a.phi.begin(), a.phi.begin() + n));
}
MomentSeq psi_moments(const AlgebraSpec& a, int n) {
  return MomentSeq(std::vector<Rational>(a.psi.begin(), a.psi.begin() + n));
}

MixedMomentReport compare_sums(const AlgebraSpec& lower, const AlgebraSpec& upper, int n_max, const MomentSeq& phi_ref,
                               const MomentSeq& psi_ref) {
  MixedMomentReport rep;
  for (int n = 1; n <= n_max; ++n) {
    PairValue v = sum_power(lower, upper, n);
    ++rep.words_checked;
    if (v.phi != phi_ref(n) || v.psi != psi_ref(n))
      rep.mismatches.push_back({"(x" + std::to_string(lower.index) + "+x" + std::to_string(upper.index) + ")^" +
                                    std::to_string(n),
                                "words " + pair_str(v) + " convolution (" + to_string(phi_ref(n)) + ", " +
                                    to_string(psi_ref(n)) + ")"});
  }
  return rep;
}

}  // namespace

MixedMomentReport check_sum_moments(const AlgebraSpec& lower, const AlgebraSpec& upper, int n_max) {
  if (lower.index >= upper.index) fail(ErrorCode::InvalidSpec, "lower algebra must have the smaller index");
  if (std::min(lower.degree_cap(), upper.degree_cap()) < n_max)
    fail(ErrorCode::InsufficientOrder, "tables shorter than the requested order");
  MomentPair p1{phi_moments(lower, n_max), psi_moments(lower, n_max)};
  MomentPair p2{phi_moments(upper, n_max), psi_moments(upper, n_max)};
  MomentPair ref = cmonotone_convolve(p1, p2);
  return compare_sums(lower, upper, n_max, ref.first, ref.second);
}

MixedMomentReport check_orthogonality(const AlgebraSpec& lower, const AlgebraSpec& upper_in, int n_max) {
  if (lower.index >= upper_in.index) fail(ErrorCode::InvalidSpec, "lower algebra must have the smaller index");
  if (std::min(lower.degree_cap(), upper_in.degree_cap()) < n_max)
    fail(ErrorCode::InsufficientOrder, "tables shorter than the requested order");
  AlgebraSpec upper = upper_in;
  std::fill(upper.phi.begin(), upper.phi.end(), Rational(0));
  MomentSeq phi_ref = orthogonal_convolve(phi_moments(lower, n_max), psi_moments(upper, n_max));
  MomentSeq psi_ref = monotone_convolve(psi_moments(lower, n_max), psi_moments(upper, n_max));
  return compare_sums(lower, upper, n_max, phi_ref, psi_ref);
}

Rational centred_expansion_value(const Word& word, const AlgebraSpec& lower, const AlgebraSpec& upper) {
  const auto& L = word.letters();
  std::size_t n = L.size();
  if (n % 2 == 0) fail(ErrorCode::MalformedWord, "expected x_1 y_1 ... x_n");
  for (std::size_t i = 0; i < n; ++i) {
    int want = i % 2 == 0 ? lower.index : upper.index;
    if (L[i].algebra != want) fail(ErrorCode::MalformedWord, "expected alternating lower/upper letters");
  }
  std::size_t gaps = n / 2;
  Rational total(0);
  // S = set of y's kept centred; the x's between consecutive centred y's merge.
  for (std::uint64_t S = 0; S < (std::uint64_t{1} << gaps); ++S) {
    Rational term(1);
    int block = 0;
    for (std::size_t k = 0; k < gaps; ++k) {
      PairValue y = table_value(upper, L[2 * k + 1].exponent);
      block += L[2 * k].exponent;
      if ((S >> k) & 1) {
        term *= (y.phi - y.psi) * table_value(lower, block).phi;
        block = 0;
      } else {
        term *= y.psi;
      }
    }
    block += L[n - 1].exponent;
    term *= table_value(lower, block).phi;
    total += term;
  }
  return total;
}

AlgebraSpec random_tables(std::mt19937_64& rng, int index, int degree, int range) {
  std::uniform_int_distribution<int> num(-range, range), den(1, 3);
  AlgebraSpec a;
  a.index = index;
  for (int k = 0; k < degree; ++k) {
    a.phi.push_back(Rational(num(rng)) / Rational(den(rng)));
    a.psi.push_back(Rational(num(rng)) / Rational(den(rng)));
  }
  return a;
}

}  // namespace cmono
