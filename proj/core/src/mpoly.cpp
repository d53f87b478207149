#include "cmono/mpoly.hpp"

#include <sstream>

namespace cmono {

namespace {

void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

}  // namespace

Monomial make_monomial(std::initializer_list<std::pair<int, unsigned>> powers) {
  Monomial m;
  for (auto [v, e] : powers) {
    if (m.size() <= static_cast<std::size_t>(v)) m.resize(static_cast<std::size_t>(v) + 1, 0);
    m[static_cast<std::size_t>(v)] += e;
  }
  trim(m);
  return m;
}

MPoly::MPoly(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

MPoly MPoly::var(int index) { return term(Rational(1), make_monomial({{index, 1U}})); }

MPoly MPoly::term(const Rational& c, Monomial m) {
  MPoly p;
  trim(m);
  p.add_term(m, c);
  return p;
}

bool MPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational MPoly::constant_term() const { return coeff(Monomial{}); }

Rational MPoly::coeff(const Monomial& m) const {
  Monomial key = m;
  trim(key);
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

int MPoly::max_var() const {
  int best = -1;
  for (const auto& [m, c] : terms_) best = std::max(best, static_cast<int>(m.size()) - 1);
  return best;
}

int MPoly::degree_in(int var) const {
  int best = terms_.empty() ? -1 : 0;
  for (const auto& [m, c] : terms_) {
    if (static_cast<std::size_t>(var) < m.size()) best = std::max(best, static_cast<int>(m[static_cast<std::size_t>(var)]));
  }
  return best;
}

MPoly MPoly::coeff_of(int var, unsigned k) const {
  MPoly out;
  auto v = static_cast<std::size_t>(var);
  for (const auto& [m, c] : terms_) {
    unsigned e = v < m.size() ? m[v] : 0U;
    if (e != k) continue;
    Monomial rest = m;
    if (v < rest.size()) rest[v] = 0;
    trim(rest);
    out.add_term(rest, c);
  }
  return out;
}

Rational MPoly::evaluate(const std::vector<Rational>& values) const {
  Rational total(0);
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      t *= pow(values.at(i), m[i]);
    }
    total += t;
  }
  return total;
}

void MPoly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MPoly& MPoly::operator+=(const MPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

MPoly& MPoly::operator*=(const MPoly& o) {
  MPoly r;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m = multiply(ma, mb);
      trim(m);
      r.add_term(m, ca * cb);
    }
  }
  terms_ = std::move(r.terms_);
  return *this;
}

MPoly& MPoly::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

std::string MPoly::str(const std::function<std::string(int)>& name) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    Rational mag = c < 0 ? Rational(-c) : c;
    bool unit = (mag == 1) && !m.empty();
    if (!unit) os << to_string(mag);
    bool need_star = !unit;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (need_star) os << "*";
      os << name(static_cast<int>(i));
      if (m[i] > 1) os << "^" << m[i];
      need_star = true;
    }
    first = false;
  }
  return os.str();
}

std::string MPoly::str() const {
  return str([](int i) { return "x" + std::to_string(i); });
}

}  // namespace cmono
