#include "cmono/poly.hpp"

#include "cmono/error.hpp"

#include <algorithm>
#include <sstream>

namespace cmono {

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly::Poly(const Rational& constant) {
  if (constant != 0) c_.push_back(constant);
}

Poly Poly::z() { return Poly(std::vector<Rational>{Rational(0), Rational(1)}); }

Poly Poly::monomial(const Rational& c, int degree) {
  std::vector<Rational> v(static_cast<std::size_t>(degree) + 1, Rational(0));
  v.back() = c;
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::coeff(int i) const {
  if (i < 0 || i > degree()) return Rational(0);
  return c_[static_cast<std::size_t>(i)];
}

Rational Poly::leading() const { return c_.empty() ? Rational(0) : c_.back(); }

Rational Poly::operator()(const Rational& x) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::complex<double> Poly::operator()(std::complex<double> x) const {
  std::complex<double> acc(0.0, 0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + to_double(*it);
  return acc;
}

HighFloat Poly::eval_high(const HighFloat& x) const {
  HighFloat acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->convert_to<HighFloat>();
  return acc;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long>(i));
  return Poly(std::move(d));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Poly out = *this;
  Rational inv = 1 / leading();
  out *= inv;
  return out;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Poly& o) {
  if (is_zero() || o.is_zero()) {
    c_.clear();
    return *this;
  }
  std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  c_ = std::move(r);
  trim();
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& x : c_) x *= s;
  return *this;
}

std::string Poly::str(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rational& a = c_[static_cast<std::size_t>(i)];
    if (a == 0) continue;
    if (!first) os << (a > 0 ? " + " : " - ");
    else if (a < 0) os << "-";
    Rational mag = a < 0 ? Rational(-a) : a;
    if (mag != 1 || i == 0) os << to_string(mag);
    if (i > 0) os << var;
    if (i > 1) os << "^" << i;
    first = false;
  }
  return os.str();
}

DivMod divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> rem = a.coeffs();
  int db = b.degree();
  int da = a.degree();
  if (da < db) return {Poly(), a};
  std::vector<Rational> q(static_cast<std::size_t>(da - db) + 1, Rational(0));
  Rational lead_inv = 1 / b.leading();
  const auto& bc = b.coeffs();
  for (int k = da - db; k >= 0; --k) {
    Rational f = rem[static_cast<std::size_t>(k + db)] * lead_inv;
    q[static_cast<std::size_t>(k)] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= f * bc[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Poly(std::move(q)), Poly(std::move(rem))};
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).remainder;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

Poly pow(const Poly& p, int exponent) {
  Poly result(Rational(1));
  Poly base = p;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

int sign_at(const Poly& p, const Rational& x) {
  Rational v = p(x);
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

namespace {

std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain;
  chain.push_back(p);
  chain.push_back(p.derivative());
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    Poly r = divmod(chain[chain.size() - 2], chain.back()).remainder;
    if (r.is_zero()) break;
    // keep the sign of -r, rescale by a positive constant to tame growth
    Rational lead = r.leading();
    r *= Rational(-1) / (lead > 0 ? lead : Rational(-lead));
    chain.push_back(std::move(r));
  }
  if (chain.back().is_zero()) chain.pop_back();
  return chain;
}

int variations(const std::vector<int>& signs) {
  int count = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

int variations_at(const std::vector<Poly>& chain, const Rational& x) {
  std::vector<int> s;
  s.reserve(chain.size());
  for (const auto& q : chain) s.push_back(sign_at(q, x));
  return variations(s);
}

int variations_at_infinity(const std::vector<Poly>& chain, bool positive) {
  std::vector<int> s;
  for (const auto& q : chain) {
    int sg = q.leading() > 0 ? 1 : -1;
    if (!positive && (q.degree() % 2 == 1)) sg = -sg;
    s.push_back(sg);
  }
  return variations(s);
}

Rational root_bound(const Poly& p) {
  Rational lead = p.leading();
  Rational m(0);
  for (int i = 0; i < p.degree(); ++i) {
    Rational r = p.coeff(i) / lead;
    if (r < 0) r = -r;
    if (r > m) m = r;
  }
  Rational bound(1);
  while (bound <= m + 1) bound *= 2;
  return bound;
}

Rational abs_r(const Rational& x) { return x < 0 ? Rational(-x) : x; }

}  // namespace

int count_distinct_real_roots(const Poly& p) {
  if (p.degree() <= 0) return 0;
  Poly sf = divmod(p, gcd(p, p.derivative())).quotient;
  auto chain = sturm_chain(sf);
  return variations_at_infinity(chain, false) - variations_at_infinity(chain, true);
}

int count_roots_below(const Poly& p, const Rational& x) {
  if (p.degree() <= 0) return 0;
  Poly sf = divmod(p, gcd(p, p.derivative())).quotient;
  auto chain = sturm_chain(sf);
  int n = variations_at_infinity(chain, false) - variations_at(chain, x);
  return sign_at(sf, x) == 0 ? n - 1 : n;
}

std::vector<RealRoot> real_roots(const Poly& p, int bits) {
  std::vector<RealRoot> roots;
  if (p.degree() <= 0) return roots;
  auto chain = sturm_chain(p);
  Rational bound = root_bound(p);
  struct Pending {
    Rational lo, hi;
    int vlo, vhi;
  };
  std::vector<Pending> stack{{-bound, bound, variations_at(chain, -bound), variations_at(chain, bound)}};
  std::vector<std::pair<Rational, Rational>> isolated;
  while (!stack.empty()) {
    Pending cur = stack.back();
    stack.pop_back();
    int count = cur.vlo - cur.vhi;
    if (count <= 0) continue;
    if (count == 1) {
      isolated.emplace_back(cur.lo, cur.hi);
      continue;
    }
    Rational mid = (cur.lo + cur.hi) / 2;
    int vmid = variations_at(chain, mid);
    stack.push_back({cur.lo, mid, cur.vlo, vmid});
    stack.push_back({mid, cur.hi, vmid, cur.vhi});
  }
  std::sort(isolated.begin(), isolated.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  Rational two_pow = pow(Rational(2), static_cast<unsigned>(bits));
  for (auto [lo, hi] : isolated) {
    // the root lies in (lo, hi]
    RealRoot root;
    std::optional<Rational> exact;
    if (sign_at(p, hi) == 0) {
      exact = hi;
    } else {
      int slo = sign_at(p, lo);
      int vlo = variations_at(chain, lo);
      for (;;) {
        Rational scale = std::max(Rational(1), std::max(abs_r(lo), abs_r(hi)));
        if ((hi - lo) * two_pow <= scale) break;
        Rational mid = (lo + hi) / 2;
        int smid = sign_at(p, mid);
        if (smid == 0) {
          exact = mid;
          break;
        }
        bool left;
        if (slo != 0) {
          left = smid != slo;
        } else {
          int vmid = variations_at(chain, mid);
          left = (vlo - vmid) == 1;
          vlo = left ? vlo : vmid;
        }
        if (left) {
          hi = mid;
        } else {
          lo = mid;
          slo = smid;
        }
      }
      if (!exact) {
        Rational candidate = simplest_between(lo, hi);
        if (sign_at(p, candidate) == 0) exact = candidate;
      }
    }
    root.lo = exact ? *exact : lo;
    root.hi = exact ? *exact : hi;
    root.exact = exact;
    if (exact) {
      root.value = exact->convert_to<HighFloat>();
    } else {
      root.value = ((lo + hi) / 2).convert_to<HighFloat>();
    }
    roots.push_back(std::move(root));
  }
  return roots;
}

}  // namespace cmono
