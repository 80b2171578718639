#ifndef KERRPAIR_IO_HPP
#define KERRPAIR_IO_HPP

#include <string>

#include "kerrpair/fock.hpp"

// single-header nlohmann/json from vendor/
#include "json.hpp"

namespace kerrpair {

using Json = nlohmann::json;

// All floating-point output is written with 12 significant digits.
std::string format_sig(double value);

// Round a double to its 12-significant-digit decimal representation so that
// JSON emission and re-parsing are bit-stable.
double round_sig(double value);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

// Recursively round every number in a JSON document (see round_sig).
void round_json_numbers(Json& j);

} // namespace kerrpair

#endif
