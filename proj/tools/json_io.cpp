#include "json_io.hpp"

#include "cmono/error.hpp"

#include <fstream>
#include <sstream>

namespace cmono::io {

Json load(const std::string& text_or_path) {
  std::string text = text_or_path;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) fail(ErrorCode::InvalidSpec, "empty spec");
  if (text[first] != '{' && text[first] != '[') {
    std::ifstream in(text_or_path);
    if (!in) fail(ErrorCode::InvalidSpec, "cannot open '" + text_or_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::InvalidSpec, std::string("bad JSON: ") + e.what());
  }
}

Rational to_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) return parse_rational(j.dump());
  fail(ErrorCode::InvalidSpec, "expected a rational, got " + j.dump());
}

Json from_rational(const Rational& q) { return to_string(q); }

Json from_rationals(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(from_rational(q));
  return a;
}

namespace {

const Json& field_of(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::InvalidSpec, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<Atom> atoms_of(const Json& arr) {
  if (!arr.is_array()) fail(ErrorCode::InvalidSpec, "atoms must be an array of [x, w]");
  std::vector<Atom> atoms;
  for (const auto& a : arr) {
    if (!a.is_array() || a.size() != 2) fail(ErrorCode::InvalidSpec, "atom must be [x, w]");
    atoms.push_back({to_rational(a[0]), to_rational(a[1])});
  }
  return atoms;
}

Json atoms_json(const std::vector<Atom>& atoms) {
  Json arr = Json::array();
  for (const auto& a : atoms) arr.push_back(Json::array({from_rational(a.x), from_rational(a.w)}));
  return arr;
}

}  // namespace

MeasureSpec measure_spec(const Json& j) {
  std::string type = field_of(j, "type").get<std::string>();
  if (type == "atomic") return AtomicMeasure(atoms_of(field_of(j, "atoms")));
  NamedLaw law;
  if (type == "arcsine") {
    law = ArcsineLaw{to_rational(field_of(j, "var"))};
  } else if (type == "kesten") {
    law = KestenLaw{to_rational(field_of(j, "alpha2")), to_rational(field_of(j, "beta2"))};
  } else if (type == "poisson") {
    law = MonotonePoissonLaw{to_rational(field_of(j, "rho"))};
  } else if (type == "cauchy") {
    law = CauchyLaw{to_rational(field_of(j, "b"))};
  } else {
    fail(ErrorCode::InvalidSpec, "unknown measure type '" + type + "'");
  }
  validate(law);
  return law;
}

Json measure_json(const AtomicMeasure& mu) { return Json{{"type", "atomic"}, {"atoms", atoms_json(mu.atoms())}}; }

Json moments_json(const MomentSeq& m) { return Json{{"moments", from_rationals(m.values())}}; }

PickField field(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidSpec, "a field is a JSON object");
  PickField A;
  if (j.contains("gamma")) A.gamma = to_rational(j.at("gamma"));
  if (j.contains("tau")) A.tau = atoms_of(j.at("tau"));
  if (j.contains("drift")) A.imag_drift = j.at("drift").get<double>();
  validate(A);
  return A;
}

Json field_json(const PickField& A) {
  Json j{{"gamma", from_rational(A.gamma)}, {"tau", atoms_json(A.tau)}};
  if (A.imag_drift != 0) j["drift"] = A.imag_drift;
  return j;
}

std::vector<AlgebraSpec> tables(const Json& j) {
  const Json& arr = j.is_object() ? field_of(j, "algebras") : j;
  if (!arr.is_array()) fail(ErrorCode::InvalidSpec, "tables must be an array of algebras");
  std::vector<AlgebraSpec> out;
  for (const auto& a : arr) {
    AlgebraSpec spec;
    spec.index = field_of(a, "index").get<int>();
    for (const auto& v : field_of(a, "phi")) spec.phi.push_back(to_rational(v));
    for (const auto& v : field_of(a, "psi")) spec.psi.push_back(to_rational(v));
    out.push_back(std::move(spec));
  }
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cmono::io
