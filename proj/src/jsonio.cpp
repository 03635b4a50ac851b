#include "qalg/jsonio.hpp"

namespace qalg {

Json to_json(const RatMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j)
      row.push_back(format_rational(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RatMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw UsageError("matrix json: expected array");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows == 0 ? 0 : static_cast<Index>(j[0].size());
  RatMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(j[r].size()) != cols)
      throw UsageError("matrix json: ragged rows");
    for (Index c = 0; c < cols; ++c)
      m(r, c) = parse_rational(j[r][c].get<std::string>());
  }
  return m;
}

Json to_json(const RatVector& v) {
  Json row = Json::array();
  for (Index i = 0; i < v.size(); ++i) row.push_back(format_rational(v(i)));
  return row;
}

RatVector vector_from_json(const Json& j) {
  RatVector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i)
    v(i) = parse_rational(j[i].get<std::string>());
  return v;
}

Json module_to_json(const AHModule& m) {
  Json out;
  out["n"] = m.rank();
  out["uprime"] = to_json(m.uprime().basis());
  return out;
}

AHModule module_from_json(const Json& j) {
  if (!j.contains("n") || !j.contains("uprime"))
    throw UsageError("module json: need fields n, uprime");
  Index n = j["n"].get<Index>();
  RatMatrix rows = matrix_from_json(j["uprime"]);
  if (rows.rows() == 0)
    return AHModule::make(n, Subspace::zero(4 * n));
  if (rows.cols() != 4 * n)
    throw UsageError("module json: uprime rows must have 4n entries");
  return AHModule::make(n, Subspace::from_rows(rows));
}

Json fingerprint_to_json(const IsoFingerprint& fp) {
  Json out;
  out["quat_rank"] = fp.quat_rank;
  out["uprime_dim"] = fp.uprime_dim;
  out["dagger_dim"] = fp.dagger_dim;
  out["virtual_dim"] = fp.virtual_dim;
  out["sector_dims"] = fp.sector_dims;
  Json probes = Json::array();
  for (const Quaternion& q : canonical_probes())
    probes.push_back({format_rational(q.r1), format_rational(q.r2),
                      format_rational(q.r3)});
  out["probes"] = std::move(probes);
  return out;
}

std::string digest(const Json& j) {
  std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace qalg
