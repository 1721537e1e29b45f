#pragma once

// JSON encodings used by the command line and the golden files:
//   SetPartition     {"n": 4, "blocks": [[1, 4], [2, 3]]}
//   FrequencyVector  {"p": [...], "dust": x, "residual": x}
//   exact rational   {"num": 1, "den": 6}  (integers that overflow 64 bits
//                    are written as decimal strings)

#include <json.hpp>

#include "partlab/core.hpp"

namespace partlab {

using Json = nlohmann::ordered_json;

Json to_json(const SetPartition& partition);
SetPartition partition_from_json(const Json& j);

Json scalar_to_json(const Rational& q);
Json scalar_to_json(double x);

Rational rational_from_json(const Json& j);

template <Scalar S>
Json to_json(const FrequencyVector<S>& frequencies);

template <Scalar S>
FrequencyVector<S> frequencies_from_json(const Json& j);

}  // namespace partlab
