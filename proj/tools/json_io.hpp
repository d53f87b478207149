#pragma once

#include "cmono/cumulants.hpp"
#include "cmono/measures.hpp"
#include "cmono/mixed_moments.hpp"
#include "cmono/semigroups.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cmono::io {

using Json = nlohmann::json;

// Inline JSON when the text starts with '{' or '[', otherwise a file path.
Json load(const std::string& text_or_path);

// Rationals are "p/q" strings; plain JSON numbers are accepted on input.
Rational to_rational(const Json& j);
Json from_rational(const Rational& q);
Json from_rationals(const std::vector<Rational>& v);

MeasureSpec measure_spec(const Json& j);
Json measure_json(const AtomicMeasure& mu);
// {"moments": [...]} with m_1..m_K
Json moments_json(const MomentSeq& m);

// {"gamma": "p/q", "tau": [[x, w], ...], "drift": b}
PickField field(const Json& j);
Json field_json(const PickField& A);

// [{"index": 1, "phi": [...], "psi": [...]}, ...] or {"algebras": [...]}
std::vector<AlgebraSpec> tables(const Json& j);

// Sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace cmono::io
