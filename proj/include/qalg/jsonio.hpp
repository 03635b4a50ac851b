#ifndef QALG_JSONIO_HPP
#define QALG_JSONIO_HPP

#include <json.hpp>

#include "qalg/ahmodule.hpp"

namespace qalg {

using Json = nlohmann::ordered_json;

// Rationals serialize as "p/q" ("p" when q = 1) in all payloads.
Json to_json(const RatMatrix& m);
RatMatrix matrix_from_json(const Json& j);
Json to_json(const RatVector& v);
RatVector vector_from_json(const Json& j);

// Module format: {"n": int, "uprime": [[rational strings]]} with rows over
// R^{4n}.
Json module_to_json(const AHModule& m);
AHModule module_from_json(const Json& j);

Json fingerprint_to_json(const IsoFingerprint& fp);

// FNV-1a hex digest of the canonical dump, for report input echoing.
std::string digest(const Json& j);

}  // namespace qalg

#endif  // QALG_JSONIO_HPP
