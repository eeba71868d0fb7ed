#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "rescomp/core/channel.hpp"

namespace rescomp::io {

using Json = nlohmann::json;

/// {"re": [[...]], "im": [[...]]}, row-major.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// {"shape": [...], "re": [[...]], "im": [[...]]}
Json to_json(const DensityMatrix& rho);
Json to_json(const HermitianOperator& h);
Json to_json(const QuantumChannel& ch);
SubsystemShape shape_from_json(const Json& j);
DensityMatrix density_from_json(const Json& j);
HermitianOperator hermitian_from_json(const Json& j);
QuantumChannel channel_from_json(const Json& j);

Json read_json_file(const std::string& path);
/// %.12g, with "inf"/"-inf"/"nan" spelled out.
std::string format_number(double v);

/// Writes to path.tmp, then renames onto path.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace rescomp::io
