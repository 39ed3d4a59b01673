#pragma once

// JSON forms:
//   coefficient: [{"vars": {"a_2": 1, "eps": 1}, "q": "-3/2"}, ...]
//   element:     [{"coeff": <coefficient>, "matrix": [a, b, c, d]}, ...]
// Matrix entries are numbers when they fit in 64 bits, strings otherwise.

#include "json.hpp"

#include "hw/group_ring.hpp"
#include "hw/hypotheses.hpp"

namespace hw {

using json = nlohmann::ordered_json;

json to_json(const Coefficient& c);
Coefficient coefficient_from_json(const json& j);

json to_json(const ProjMatrix& m);
ProjMatrix matrix_from_json(const json& j);

json to_json(const Element& x);
Element element_from_json(const json& j);

json to_json(const MatrixClass& c);
json to_json(const Step& s, long level);
json to_json(const DerivationLog& log, long level);

} // namespace hw
