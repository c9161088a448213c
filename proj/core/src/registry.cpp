#include "cano/registry.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json_util.hpp"

namespace cano::io {

namespace {

using detail::field;
using detail::json;

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return detail::parse_json(ss.str(), path.string());
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::string relative_to(const fs::path& base, const fs::path& p) {
  if (p.is_relative()) {
    return p.generic_string();
  }
  const fs::path rel = p.lexically_relative(base);
  return rel.empty() ? p.generic_string() : rel.generic_string();
}

Eigen::Vector3d parse_axis(const json& j, const std::string& where) {
  const auto a = field<std::vector<double>>(j, "axis", where);
  if (a.size() != 3) {
    throw Error(ErrorCode::kIo, where + ": symmetry axis needs 3 components");
  }
  const Eigen::Vector3d v(a[0], a[1], a[2]);
  if (!(v.norm() > 0.0)) {
    throw Error(ErrorCode::kIo, where + ": symmetry axis is zero");
  }
  return v.normalized();
}

SymmetrySpec parse_symmetry(const json& j, const std::string& where) {
  if (j.is_null()) {
    return SymmetrySpec::none();
  }
  std::string kind;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else {
    kind = field<std::string>(j, "kind", where);
  }
  if (kind == "none") {
    return SymmetrySpec::none();
  }
  if (kind == "continuous") {
    return SymmetrySpec::continuous(j.is_object() ? parse_axis(j, where) : Eigen::Vector3d::UnitZ());
  }
  if (kind == "discrete" && j.is_object()) {
    try {
      return SymmetrySpec::discrete(parse_axis(j, where), field<double>(j, "angle", where));
    } catch (const Error& e) {
      throw Error(ErrorCode::kIo, where + ": " + e.what());
    }
  }
  throw Error(ErrorCode::kIo, where + ": unknown symmetry '" + kind + "'");
}

json symmetry_json(const SymmetrySpec& s) {
  switch (s.kind) {
    case SymmetryKind::kNone:
      return "none";
    case SymmetryKind::kContinuous:
      return {{"kind", "continuous"}, {"axis", {s.axis.x(), s.axis.y(), s.axis.z()}}};
    case SymmetryKind::kDiscrete:
      return {{"kind", "discrete"}, {"axis", {s.axis.x(), s.axis.y(), s.axis.z()}}, {"angle", s.angle_deg}};
  }
  return "none";
}

}  // namespace

std::vector<ObjectEntry> read_object_manifest(const fs::path& path) {
  const json j = read_json_file(path);
  const fs::path base = path.parent_path();
  const std::string where = path.string();
  if (!j.contains("objects") || !j["objects"].is_array()) {
    throw Error(ErrorCode::kIo, where + ": expected an 'objects' array");
  }
  std::vector<ObjectEntry> out;
  std::set<std::string> seen;
  for (const auto& o : j["objects"]) {
    ObjectEntry e;
    e.id = field<std::string>(o, "id", where);
    e.category = field<std::string>(o, "category", where);
    e.path = resolve(base, field<std::string>(o, "path", where));
    if (o.contains("labels")) {
      e.labels = resolve(base, field<std::string>(o, "labels", where));
    }
    if (!seen.insert(e.id).second) {
      throw Error(ErrorCode::kIo, where + ": duplicate object id '" + e.id + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

void write_object_manifest(const fs::path& path, const std::vector<ObjectEntry>& entries) {
  const fs::path base = path.parent_path();
  json objects = json::array();
  for (const auto& e : entries) {
    json o{{"id", e.id}, {"category", e.category}, {"path", relative_to(base, e.path)}};
    if (e.labels) {
      o["labels"] = relative_to(base, *e.labels);
    }
    objects.push_back(std::move(o));
  }
  write_json_file(path, json{{"objects", objects}});
}

PreparedObject load_prepared_object(const ObjectEntry& entry, const LoadOptions& opts) {
  LoadOptions o = opts;
  if (entry.labels) {
    o.labels_path = entry.labels;
  }
  LoadedObject loaded = load_object(entry.path, o);
  try {
    return prepare_object(entry.id, entry.category, std::move(loaded.mesh), loaded.cloud);
  } catch (const Error& e) {
    throw Error(e.code(), entry.path.string() + ": " + e.what());
  }
}

TemplateRegistry load_template_registry(const fs::path& path, const LoadOptions& opts) {
  const json j = read_json_file(path);
  const fs::path base = path.parent_path();
  const std::string where = path.string();
  if (!j.contains("templates") || !j["templates"].is_array()) {
    throw Error(ErrorCode::kIo, where + ": expected a 'templates' array");
  }
  TemplateRegistry reg;
  for (const auto& t : j["templates"]) {
    ObjectEntry entry;
    entry.category = field<std::string>(t, "category", where);
    entry.id = t.value("template_id", entry.category);
    entry.path = resolve(base, field<std::string>(t, "path", where));
    if (t.contains("labels")) {
      entry.labels = resolve(base, field<std::string>(t, "labels", where));
    }
    if (reg.contains(entry.category)) {
      throw Error(ErrorCode::kIo, where + ": second template for category '" + entry.category + "'");
    }
    PreparedObject p = load_prepared_object(entry, opts);
    CategoryTemplate tmpl;
    tmpl.category = entry.category;
    tmpl.template_id = entry.id;
    tmpl.cloud = std::move(p.cloud);
    tmpl.mesh = std::move(p.mesh);
    tmpl.symmetry = parse_symmetry(t.value("symmetry", json()), where + " [" + entry.category + "]");
    tmpl.axis_convention = t.value("axis_convention", std::string());
    reg.add(std::move(tmpl));
  }
  return reg;
}

void write_template_registry(const fs::path& path, const std::vector<TemplateEntry>& entries) {
  const fs::path base = path.parent_path();
  json templates = json::array();
  for (const auto& e : entries) {
    json t{{"category", e.category},
           {"template_id", e.template_id},
           {"path", relative_to(base, e.path)},
           {"symmetry", symmetry_json(e.symmetry)},
           {"axis_convention", e.axis_convention}};
    if (e.labels) {
      t["labels"] = relative_to(base, *e.labels);
    }
    templates.push_back(std::move(t));
  }
  write_json_file(path, json{{"templates", templates}});
}

}  // namespace cano::io
