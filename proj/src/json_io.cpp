#include "hrc/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hrc/error.hpp"

namespace hrc {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ParseError, path + ": " + what);
}

void write_real(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
  // Keep reals recognizable as reals on re-read.
  if (std::string(buf).find_first_of(".eEn") == std::string::npos) out += ".0";
}

void write(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        write(out, it.value(), indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Flat numeric arrays stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && e.is_primitive();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(out, j[i], indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write(out, j[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      write_real(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError,
                source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": syntax error");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

std::string dump_canonical(const Json& j) {
  std::string out;
  write(out, j, 0);
  out += "\n";
  return out;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, path + ": cannot write file");
  out << dump_canonical(j);
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, std::size_t index) { return path + "[" + std::to_string(index) + "]"; }

bool has(const Json& obj, const char* key) { return obj.is_object() && obj.contains(key); }

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(join(path, key), "missing field");
  return *it;
}

double read_number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "not finite");
  return v;
}

std::string read_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double read_angle(const Json& j, const std::string& path) {
  if (j.is_number()) return read_number(j, path);
  if (!j.is_string()) fail(path, "expected an angle");
  const std::string s = j.get<std::string>();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(path, "bad angle '" + s + "'");
  }
  std::string unit = s.substr(used);
  unit.erase(0, unit.find_first_not_of(' '));
  if (unit == "deg") return deg2rad(v);
  if (unit == "rad" || unit.empty()) return v;
  fail(path, "unknown angle unit '" + unit + "'");
}

Vec3 read_vec3(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected 3 numbers");
  return {read_number(j[0], join(path, std::size_t{0})), read_number(j[1], join(path, std::size_t{1})), read_number(j[2], join(path, std::size_t{2}))};
}

Eigen::VectorXd read_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = read_angle(j[i], join(path, i));
  return v;
}

Pose read_pose(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a pose object");
  Pose pose;
  if (has(j, "position")) pose.p = read_vec3(j["position"], join(path, "position"));
  if (has(j, "quaternion")) {
    const std::string qp = join(path, "quaternion");
    const Json& q = j["quaternion"];
    if (!q.is_array() || q.size() != 4) fail(qp, "expected [w, x, y, z]");
    Eigen::Vector4d wxyz;
    for (int i = 0; i < 4; ++i) wxyz[i] = read_number(q[static_cast<std::size_t>(i)], join(qp, static_cast<std::size_t>(i)));
    try {
      pose.R = from_wxyz(wxyz);
    } catch (const Error& e) {
      fail(qp, e.what());
    }
  }
  return pose;
}

Obb read_obb(const Json& j, const std::string& path) {
  Obb box;
  box.frame = has(j, "pose") ? read_pose(j["pose"], join(path, "pose")) : Pose{};
  box.half = read_vec3(field(j, "half", path), join(path, "half"));
  if ((box.half.array() < 0.0).any()) fail(join(path, "half"), "negative half extent");
  return box;
}

std::vector<Obb> read_obbs(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of boxes");
  std::vector<Obb> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_obb(j[i], join(path, i)));
  return out;
}

Json to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const Pose& pose) {
  const Eigen::Vector4d q = to_wxyz(pose.R);
  return Json{{"position", to_json(pose.p)}, {"quaternion", Json::array({q[0], q[1], q[2], q[3]})}};
}

Json to_json(const Obb& box) { return Json{{"pose", to_json(box.frame)}, {"half", to_json(box.half)}}; }

Json to_json(const std::vector<Obb>& boxes) {
  Json a = Json::array();
  for (const auto& b : boxes) a.push_back(to_json(b));
  return a;
}

SerialChain read_chain(const Json& j, const std::string& path) {
  SerialChain c;
  c.name = read_string(field(j, "name", path), join(path, "name"));
  if (has(j, "base")) c.base = read_pose(j["base"], join(path, "base"));
  if (has(j, "base_proxies")) c.base_proxies = read_obbs(j["base_proxies"], join(path, "base_proxies"));
  const std::string jp = join(path, "joints");
  const Json& joints = field(j, "joints", path);
  if (!joints.is_array()) fail(jp, "expected an array");
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const std::string p = join(jp, i);
    const Json& e = joints[i];
    Joint joint;
    joint.name = read_string(field(e, "name", p), join(p, "name"));
    if (has(e, "origin")) joint.origin = read_pose(e["origin"], join(p, "origin"));
    joint.axis = read_vec3(field(e, "axis", p), join(p, "axis"));
    if (std::abs(joint.axis.norm() - 1.0) > 1e-9) fail(join(p, "axis"), "axis is not a unit vector");
    if (has(e, "lower")) joint.lower = read_angle(e["lower"], join(p, "lower"));
    if (has(e, "upper")) joint.upper = read_angle(e["upper"], join(p, "upper"));
    if (has(e, "proxies")) joint.proxies = read_obbs(e["proxies"], join(p, "proxies"));
    c.joints.push_back(joint);
  }
  if (has(j, "flange_to_tcp")) c.flange_to_tcp = read_pose(j["flange_to_tcp"], join(path, "flange_to_tcp"));
  if (has(j, "tool_proxies")) c.tool_proxies = read_obbs(j["tool_proxies"], join(path, "tool_proxies"));
  if (has(j, "ik_seeds")) {
    const std::string sp = join(path, "ik_seeds");
    for (std::size_t i = 0; i < j["ik_seeds"].size(); ++i) {
      Eigen::VectorXd s = read_vector(j["ik_seeds"][i], join(sp, i));
      if (static_cast<std::size_t>(s.size()) != c.joints.size()) fail(join(sp, i), "wrong length");
      c.ik_seeds.push_back(s);
    }
  }
  try {
    c.finalize();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvariantViolation, path + ": " + e.what());
  }
  return c;
}

Json to_json(const SerialChain& c) {
  Json joints = Json::array();
  for (const auto& jt : c.joints) {
    joints.push_back(Json{{"name", jt.name},
                          {"origin", to_json(jt.origin)},
                          {"axis", to_json(jt.axis)},
                          {"lower", jt.lower},
                          {"upper", jt.upper},
                          {"proxies", to_json(jt.proxies)}});
  }
  Json seeds = Json::array();
  for (const auto& s : c.ik_seeds) seeds.push_back(to_json(s));
  return Json{{"name", c.name},
              {"base", to_json(c.base)},
              {"base_proxies", to_json(c.base_proxies)},
              {"joints", joints},
              {"flange_to_tcp", to_json(c.flange_to_tcp)},
              {"tool_proxies", to_json(c.tool_proxies)},
              {"ik_seeds", seeds}};
}

}  // namespace hrc
