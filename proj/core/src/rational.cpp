#include "cmono/rational.hpp"

#include "cmono/error.hpp"

#include <cctype>

namespace cmono {

namespace {

Rational parse_decimal(std::string_view s) {
  bool negative = false;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    negative = s[i] == '-';
    ++i;
  }
  Integer mantissa = 0;
  long scale = 0;
  bool seen_digit = false;
  bool after_point = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (after_point) --scale;
      seen_digit = true;
    } else if (c == '.' && !after_point) {
      after_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) fail(ErrorCode::InvalidSpec, "not a number: '" + std::string(s) + "'");
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') fail(ErrorCode::InvalidSpec, "not a number: '" + std::string(s) + "'");
    ++i;
    std::string exp_text(s.substr(i));
    if (exp_text.empty()) fail(ErrorCode::InvalidSpec, "bad exponent in '" + std::string(s) + "'");
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidSpec, "bad exponent in '" + std::string(s) + "'");
    }
    if (used != exp_text.size()) fail(ErrorCode::InvalidSpec, "bad exponent in '" + std::string(s) + "'");
    scale += e;
  }
  Rational value(mantissa);
  Rational ten(10);
  if (scale > 0) value *= pow(ten, static_cast<unsigned>(scale));
  if (scale < 0) value /= pow(ten, static_cast<unsigned>(-scale));
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) fail(ErrorCode::InvalidSpec, "empty rational");
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s);
  Rational p = parse_decimal(s.substr(0, slash));
  Rational q = parse_decimal(s.substr(slash + 1));
  if (q == 0) fail(ErrorCode::InvalidSpec, "zero denominator in '" + std::string(text) + "'");
  return p / q;
}

std::string to_string(const Rational& q) {
  if (is_integer(q)) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

// Continued-fraction walk: the simplest rational in [lo, hi].
Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (lo > hi) return simplest_between(hi, lo);
  if (lo <= 0 && hi >= 0) return Rational(0);
  if (hi < 0) return -simplest_between(-hi, -lo);
  Integer fl = boost::multiprecision::numerator(lo) / boost::multiprecision::denominator(lo);
  Rational fl_r(fl);
  if (fl_r == lo) return lo;
  if (fl_r + 1 <= hi) return fl_r + 1;
  // lo and hi share the integer part fl; recurse on reciprocals of fractional parts.
  Rational inner = simplest_between(1 / (hi - fl_r), 1 / (lo - fl_r));
  return fl_r + 1 / inner;
}

std::vector<Rational> to_rationals(const std::vector<long>& values) {
  std::vector<Rational> out;
  out.reserve(values.size());
  for (long v : values) out.emplace_back(v);
  return out;
}

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::CauchyHasNoMoments: return "CauchyHasNoMoments";
    case ErrorCode::NonpositiveScale: return "NonpositiveScale";
    case ErrorCode::BranchCutHit: return "BranchCutHit";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::NotAProbabilityH: return "NotAProbabilityH";
    case ErrorCode::NotFiniteVariance: return "NotFiniteVariance";
    case ErrorCode::NonconvergentLadder: return "NonconvergentLadder";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::SizeCap: return "SizeCap";
    case ErrorCode::InconsistentSystem: return "InconsistentSystem";
    case ErrorCode::NonPolynomialGrowth: return "NonPolynomialGrowth";
    case ErrorCode::TransformInapplicable: return "TransformInapplicable";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::MalformedWord: return "MalformedWord";
    case ErrorCode::LeftUpperHalfPlane: return "LeftUpperHalfPlane";
    case ErrorCode::InsufficientOrder: return "InsufficientOrder";
    case ErrorCode::NotNormalized: return "NotNormalized";
  }
  return "Unknown";
}

ErrorClass error_class(ErrorCode code) {
  switch (code) {
    case ErrorCode::BranchCutHit:
    case ErrorCode::NotAProbabilityH:
    case ErrorCode::NonconvergentLadder:
    case ErrorCode::NoSignChange:
    case ErrorCode::InconsistentSystem:
    case ErrorCode::NonPolynomialGrowth:
    case ErrorCode::LeftUpperHalfPlane:
      return ErrorClass::Numeric;
    default:
      return ErrorClass::Validation;
  }
}

}  // namespace cmono
