#include "cmono/partitions.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace cmono {

std::string NCPartition::str() const {
  std::ostringstream os;
  for (const auto& b : blocks) {
    os << "{";
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
    os << "}";
  }
  return os.str();
}

bool is_inside(const Block& v, const Block& w) { return w.front() < v.front() && v.back() < w.back(); }

bool is_noncrossing(const NCPartition& p) {
  std::vector<int> owner(static_cast<std::size_t>(p.n) + 1, -1);
  for (std::size_t b = 0; b < p.blocks.size(); ++b)
    for (int x : p.blocks[b]) owner[static_cast<std::size_t>(x)] = static_cast<int>(b);
  for (int a = 1; a <= p.n; ++a)
    for (int b = a + 1; b <= p.n; ++b)
      for (int c = b + 1; c <= p.n; ++c)
        for (int d = c + 1; d <= p.n; ++d) {
          auto oa = owner[a], ob = owner[b];
          if (oa == owner[c] && ob == owner[d] && oa != ob) return false;
        }
  return true;
}

std::vector<BlockRole> block_roles(const NCPartition& p) {
  std::vector<BlockRole> roles(p.blocks.size(), BlockRole::Outer);
  for (std::size_t v = 0; v < p.blocks.size(); ++v)
    for (std::size_t w = 0; w < p.blocks.size(); ++w)
      if (v != w && is_inside(p.blocks[v], p.blocks[w])) {
        roles[v] = BlockRole::Inner;
        break;
      }
  return roles;
}

bool satisfies_nesting_order(const OrderedPartition& p) {
  const auto& bl = p.pi.blocks;
  if (p.rank.size() != bl.size()) return false;
  std::vector<int> sorted = p.rank;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i) + 1) return false;
  for (std::size_t v = 0; v < bl.size(); ++v)
    for (std::size_t w = 0; w < bl.size(); ++w)
      if (v != w && is_inside(bl[v], bl[w]) && p.rank[v] <= p.rank[w]) return false;
  return true;
}

namespace {

using BlockList = std::vector<Block>;

// Non-crossing partitions of {1..len}; shifted copies serve any interval.
const std::vector<BlockList>& nc_of_length(int len);

void shift_into(const BlockList& src, int offset, BlockList& dst) {
  for (const auto& b : src) {
    Block s = b;
    for (int& x : s) x += offset;
    dst.push_back(std::move(s));
  }
}

void build(int len, std::vector<BlockList>& out) {
  if (len == 0) {
    out.push_back({});
    return;
  }
  // block containing 1 is {1 = j0 < j1 < ... < jk}; gaps between and after are independent
  std::vector<int> chosen{1};
  std::vector<std::pair<int, int>> gaps;  // (start, length)
  std::function<void()> dfs = [&]() {
    int pos = chosen.back();
    // stop here: tail gap
    {
      auto all_gaps = gaps;
      all_gaps.emplace_back(pos + 1, len - pos);
      std::vector<BlockList> partial{BlockList{Block(chosen.begin(), chosen.end())}};
      for (auto [start, glen] : all_gaps) {
        if (glen == 0) continue;
        const auto& sub = nc_of_length(glen);
        std::vector<BlockList> next;
        next.reserve(partial.size() * sub.size());
        for (const auto& pfx : partial)
          for (const auto& s : sub) {
            BlockList merged = pfx;
            shift_into(s, start - 1, merged);
            next.push_back(std::move(merged));
          }
        partial = std::move(next);
      }
      for (auto& bl : partial) {
        std::sort(bl.begin(), bl.end(), [](const Block& a, const Block& b) { return a.front() < b.front(); });
        out.push_back(std::move(bl));
      }
    }
    for (int j = pos + 1; j <= len; ++j) {
      gaps.emplace_back(pos + 1, j - pos - 1);
      chosen.push_back(j);
      dfs();
      chosen.pop_back();
      gaps.pop_back();
    }
  };
  dfs();
}

std::mutex cache_mutex;

const std::vector<BlockList>& nc_of_length(int len) {
  static std::map<int, std::vector<BlockList>> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(len);
    if (it != cache.end()) return it->second;
  }
  std::vector<BlockList> built;
  build(len, built);
  std::lock_guard<std::mutex> lock(cache_mutex);
  return cache.emplace(len, std::move(built)).first->second;
}

// Immediate enclosing block of each block, or -1.
std::vector<int> parents(const NCPartition& p) {
  std::vector<int> parent(p.blocks.size(), -1);
  for (std::size_t v = 0; v < p.blocks.size(); ++v) {
    int best = -1;
    for (std::size_t w = 0; w < p.blocks.size(); ++w) {
      if (v == w || !is_inside(p.blocks[v], p.blocks[w])) continue;
      // the tightest enclosing block has the largest minimum
      if (best < 0 || p.blocks[w].front() > p.blocks[static_cast<std::size_t>(best)].front()) best = static_cast<int>(w);
    }
    parent[v] = best;
  }
  return parent;
}

void linear_extensions(const std::vector<int>& parent, std::vector<int>& rank, int next_rank,
                       std::vector<std::vector<int>>& out) {
  auto k = rank.size();
  if (next_rank > static_cast<int>(k)) {
    out.push_back(rank);
    return;
  }
  for (std::size_t b = 0; b < k; ++b) {
    if (rank[b] != 0) continue;
    if (parent[b] >= 0 && rank[static_cast<std::size_t>(parent[b])] == 0) continue;
    rank[b] = next_rank;
    linear_extensions(parent, rank, next_rank + 1, out);
    rank[b] = 0;
  }
}

}  // namespace

std::vector<NCPartition> enumerate_nc(int n) {
  if (n < 1 || n > kMaxNC) fail(ErrorCode::SizeCap, "enumerate_nc supports 1 <= n <= 12");
  std::vector<NCPartition> out;
  for (const auto& bl : nc_of_length(n)) out.push_back(NCPartition{n, bl});
  return out;
}

std::vector<MonotonePartition> enumerate_monotone(int n) {
  if (n < 1 || n > kMaxMonotone) fail(ErrorCode::SizeCap, "enumerate_monotone supports 1 <= n <= 9");
  std::vector<MonotonePartition> out;
  for (const auto& bl : nc_of_length(n)) {
    NCPartition p{n, bl};
    auto parent = parents(p);
    std::vector<int> rank(bl.size(), 0);
    std::vector<std::vector<int>> ranks;
    linear_extensions(parent, rank, 1, ranks);
    for (auto& r : ranks) out.push_back({p, std::move(r)});
  }
  return out;
}

std::vector<OrderedPartition> enumerate_lnc(int n) {
  if (n < 1 || n > kMaxLNC) fail(ErrorCode::SizeCap, "enumerate_lnc supports 1 <= n <= 8");
  std::vector<OrderedPartition> out;
  for (const auto& bl : nc_of_length(n)) {
    std::vector<int> rank(bl.size());
    std::iota(rank.begin(), rank.end(), 1);
    do {
      out.push_back({NCPartition{n, bl}, rank});
    } while (std::next_permutation(rank.begin(), rank.end()));
  }
  return out;
}

Integer catalan(int n) {
  Integer c = 1;
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

Rational inverse_factorial(int k) {
  Integer f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return Rational(1) / Rational(f);
}

namespace {

Monomial shape_monomial(const NCPartition& p, const std::vector<BlockRole>& roles) {
  Monomial m;
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    int var = static_cast<int>(p.blocks[b].size()) - 1 + (roles[b] == BlockRole::Inner ? kSingleOffset : 0);
    if (m.size() <= static_cast<std::size_t>(var)) m.resize(static_cast<std::size_t>(var) + 1, 0);
    ++m[static_cast<std::size_t>(var)];
  }
  return m;
}

}  // namespace

const MPoly& cmonotone_formula(int n) {
  static std::map<int, MPoly> cache;
  static std::mutex m;
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  if (n > kMaxMonotone) fail(ErrorCode::SizeCap, "monotone partitions limited to n <= 9");
  // Literal sum over M(n); grouped per NC partition only to avoid rebuilding the role vector.
  std::map<Monomial, Rational> acc;
  for (const auto& bl : nc_of_length(n)) {
    NCPartition p{n, bl};
    auto roles = block_roles(p);
    auto parent = parents(p);
    std::vector<int> rank(bl.size(), 0);
    std::vector<std::vector<int>> ranks;
    linear_extensions(parent, rank, 1, ranks);
    Rational weight = inverse_factorial(static_cast<int>(bl.size()));
    Monomial mono = shape_monomial(p, roles);
    for (std::size_t i = 0; i < ranks.size(); ++i) acc[mono] += weight;
  }
  MPoly poly;
  for (auto& [mono, c] : acc) poly += MPoly::term(c, mono);
  std::lock_guard<std::mutex> lock(m);
  return cache.emplace(n, std::move(poly)).first->second;
}

const MPoly& cfree_formula(int n) {
  static std::map<int, MPoly> cache;
  static std::mutex m;
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  if (n > kMaxNC) fail(ErrorCode::SizeCap, "non-crossing partitions limited to n <= 12");
  std::map<Monomial, Rational> acc;
  for (const auto& bl : nc_of_length(n)) {
    NCPartition p{n, bl};
    acc[shape_monomial(p, block_roles(p))] += 1;
  }
  MPoly poly;
  for (auto& [mono, c] : acc) poly += MPoly::term(c, mono);
  std::lock_guard<std::mutex> lock(m);
  return cache.emplace(n, std::move(poly)).first->second;
}

}  // namespace cmono
