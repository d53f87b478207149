#pragma once

#include "cmono/error.hpp"
#include "cmono/mpoly.hpp"
#include "cmono/rational.hpp"

#include <string>
#include <vector>

namespace cmono {

using Block = std::vector<int>;  // sorted elements of {1..n}

struct NCPartition {
  int n = 0;
  std::vector<Block> blocks;  // ordered by smallest element

  std::string str() const;  // bracket notation, e.g. "{1,3}{2}"
};

enum class BlockRole { Outer, Inner };

// V is nested inside W: min W < min V and max V < max W.
bool is_inside(const Block& v, const Block& w);
bool is_noncrossing(const NCPartition& p);
std::vector<BlockRole> block_roles(const NCPartition& p);

// A non-crossing partition with a linear order on its blocks; rank[b] in 1..|pi|.
struct OrderedPartition {
  NCPartition pi;
  std::vector<int> rank;
};
using MonotonePartition = OrderedPartition;

// Inner blocks must rank above every block that encloses them.
bool satisfies_nesting_order(const OrderedPartition& p);

constexpr int kMaxNC = 12;
constexpr int kMaxMonotone = 9;
constexpr int kMaxLNC = 8;

std::vector<NCPartition> enumerate_nc(int n);
std::vector<MonotonePartition> enumerate_monotone(int n);
std::vector<OrderedPartition> enumerate_lnc(int n);

Integer catalan(int n);
Rational inverse_factorial(int k);

// Sum over monotone partitions of (1/|pi|!) prod_outer r_pair_|V| prod_inner r_single_|V|.
// Sequences hold r_1 at position 0. Works for any ring with R(long) and *, +.
template <class R>
R eval_cmonotone_formula(const std::vector<R>& r_pair, const std::vector<R>& r_single, int n) {
  if (n > kMaxMonotone) fail(ErrorCode::SizeCap, "monotone partitions limited to n <= 9");
  if (n == 0) return R(1);
  R total(0);
  for (const auto& mp : enumerate_monotone(n)) {
    auto roles = block_roles(mp.pi);
    R term(1);
    for (std::size_t b = 0; b < mp.pi.blocks.size(); ++b) {
      auto size = mp.pi.blocks[b].size();
      term = term * (roles[b] == BlockRole::Outer ? r_pair.at(size - 1) : r_single.at(size - 1));
    }
    total += term * inverse_factorial(static_cast<int>(mp.pi.blocks.size()));
  }
  return total;
}

// The same sum over NC(n) with R(mu,nu) on outer and R(nu) on inner blocks.
template <class R>
R eval_cfree_formula(const std::vector<R>& R_pair, const std::vector<R>& R_single, int n) {
  if (n > kMaxNC) fail(ErrorCode::SizeCap, "non-crossing partitions limited to n <= 12");
  if (n == 0) return R(1);
  R total(0);
  for (const auto& p : enumerate_nc(n)) {
    auto roles = block_roles(p);
    R term(1);
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      auto size = p.blocks[b].size();
      term = term * (roles[b] == BlockRole::Outer ? R_pair.at(size - 1) : R_single.at(size - 1));
    }
    total += term;
  }
  return total;
}

// The c-monotone moment-cumulant formula with formal indeterminates: variable
// k-1 is r_k(mu,nu), variable kSingleOffset + k - 1 is r_k(nu). Cached per n.
constexpr int kSingleOffset = 16;
const MPoly& cmonotone_formula(int n);
const MPoly& cfree_formula(int n);

}  // namespace cmono
