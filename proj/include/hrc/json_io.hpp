#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hrc/geometry.hpp"
#include "hrc/kinematics.hpp"

namespace hrc {

using Json = nlohmann::ordered_json;

/// Parses text; syntax errors become ParseError with line and column.
Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);

/// Indented output with every real written to 17 significant digits.
std::string dump_canonical(const Json& j);
void write_json_file(const std::string& path, const Json& j);

/// Field access with path-qualified diagnostics. `path` names the value
/// being read, e.g. "boards[2].initial".
const Json& field(const Json& obj, const char* key, const std::string& path);
bool has(const Json& obj, const char* key);
std::string join(const std::string& path, const char* key);
std::string join(const std::string& path, std::size_t index);

double read_number(const Json& j, const std::string& path);
std::string read_string(const Json& j, const std::string& path);
/// Radians, either a bare number or a string with a "deg" or "rad" suffix.
double read_angle(const Json& j, const std::string& path);
Vec3 read_vec3(const Json& j, const std::string& path);
Eigen::VectorXd read_vector(const Json& j, const std::string& path);
/// {"position": [x, y, z], "quaternion": [w, x, y, z]}; either may be omitted.
Pose read_pose(const Json& j, const std::string& path);
Obb read_obb(const Json& j, const std::string& path);
std::vector<Obb> read_obbs(const Json& j, const std::string& path);

Json to_json(const Vec3& v);
Json to_json(const Eigen::VectorXd& v);
Json to_json(const Pose& pose);
Json to_json(const Obb& box);
Json to_json(const std::vector<Obb>& boxes);

/// Chain-description documents.
SerialChain read_chain(const Json& j, const std::string& path);
Json to_json(const SerialChain& chain);

}  // namespace hrc
