#include "cano/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cano/error.hpp"

namespace cano::io {

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void bad_file(const fs::path& path, const std::string& why) {
  throw Error(ErrorCode::kIo, path.string() + ": " + why);
}

void triangulate(const std::vector<int>& poly, std::vector<Face>& faces) {
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    faces.push_back({poly[0], poly[k], poly[k + 1]});
  }
}

// ---- PLY ----

enum class Scalar { kI8, kU8, kI16, kU16, kI32, kU32, kF32, kF64 };

Scalar parse_scalar(const std::string& t, const fs::path& path) {
  if (t == "char" || t == "int8") return Scalar::kI8;
  if (t == "uchar" || t == "uint8") return Scalar::kU8;
  if (t == "short" || t == "int16") return Scalar::kI16;
  if (t == "ushort" || t == "uint16") return Scalar::kU16;
  if (t == "int" || t == "int32") return Scalar::kI32;
  if (t == "uint" || t == "uint32") return Scalar::kU32;
  if (t == "float" || t == "float32") return Scalar::kF32;
  if (t == "double" || t == "float64") return Scalar::kF64;
  bad_file(path, "unknown PLY scalar type '" + t + "'");
}

std::size_t scalar_size(Scalar s) {
  switch (s) {
    case Scalar::kI8: case Scalar::kU8: return 1;
    case Scalar::kI16: case Scalar::kU16: return 2;
    case Scalar::kI32: case Scalar::kU32: case Scalar::kF32: return 4;
    case Scalar::kF64: return 8;
  }
  return 0;
}

struct PlyProperty {
  std::string name;
  Scalar type = Scalar::kF32;
  bool is_list = false;
  Scalar count_type = Scalar::kU8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> props;
};

template <typename T>
T load_le(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    auto* b = reinterpret_cast<unsigned char*>(&v);
    std::reverse(b, b + sizeof(T));
  }
  return v;
}

class BinaryCursor {
 public:
  BinaryCursor(const std::string& data, std::size_t pos, const fs::path& path)
      : data_(data), pos_(pos), path_(path) {}

  double read(Scalar s) {
    const std::size_t n = scalar_size(s);
    if (pos_ + n > data_.size()) {
      bad_file(path_, "truncated binary PLY body");
    }
    const char* p = data_.data() + pos_;
    pos_ += n;
    switch (s) {
      case Scalar::kI8: return static_cast<double>(load_le<std::int8_t>(p));
      case Scalar::kU8: return static_cast<double>(load_le<std::uint8_t>(p));
      case Scalar::kI16: return static_cast<double>(load_le<std::int16_t>(p));
      case Scalar::kU16: return static_cast<double>(load_le<std::uint16_t>(p));
      case Scalar::kI32: return static_cast<double>(load_le<std::int32_t>(p));
      case Scalar::kU32: return static_cast<double>(load_le<std::uint32_t>(p));
      case Scalar::kF32: return static_cast<double>(load_le<float>(p));
      case Scalar::kF64: return load_le<double>(p);
    }
    return 0.0;
  }

 private:
  const std::string& data_;
  std::size_t pos_;
  const fs::path& path_;
};

class AsciiCursor {
 public:
  AsciiCursor(const std::string& data, std::size_t pos, const fs::path& path)
      : data_(data), pos_(pos), path_(path) {}

  double read(Scalar) {
    while (pos_ < data_.size() && std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      ++pos_;
    }
    if (pos_ >= data_.size()) {
      bad_file(path_, "truncated ASCII PLY body");
    }
    const char* begin = data_.data() + pos_;
    const char* end = data_.data() + data_.size();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc()) {
      bad_file(path_, "malformed number in ASCII PLY body");
    }
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

 private:
  const std::string& data_;
  std::size_t pos_;
  const fs::path& path_;
};

template <typename Cursor>
void read_ply_body(Cursor& cur, const std::vector<PlyElement>& elements, GeometryFile& out,
                   const fs::path& path) {
  for (const auto& el : elements) {
    const bool is_vertex = el.name == "vertex";
    const bool is_face = el.name == "face";
    int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1, iface = -1;
    for (int k = 0; k < static_cast<int>(el.props.size()); ++k) {
      const auto& n = el.props[k].name;
      if (n == "x") ix = k;
      else if (n == "y") iy = k;
      else if (n == "z") iz = k;
      else if (n == "red" || n == "r") ir = k;
      else if (n == "green" || n == "g") ig = k;
      else if (n == "blue" || n == "b") ib = k;
      else if (el.props[k].is_list && (n == "vertex_indices" || n == "vertex_index")) iface = k;
    }
    if (is_vertex && (ix < 0 || iy < 0 || iz < 0)) {
      bad_file(path, "vertex element lacks x/y/z");
    }
    const bool has_color = is_vertex && ir >= 0 && ig >= 0 && ib >= 0;
    std::vector<double> scalars(el.props.size());
    std::vector<int> poly;
    for (std::size_t i = 0; i < el.count; ++i) {
      poly.clear();
      for (int k = 0; k < static_cast<int>(el.props.size()); ++k) {
        const auto& prop = el.props[k];
        if (prop.is_list) {
          const auto n = static_cast<std::size_t>(cur.read(prop.count_type));
          for (std::size_t j = 0; j < n; ++j) {
            const double v = cur.read(prop.type);
            if (k == iface) {
              poly.push_back(static_cast<int>(v));
            }
          }
        } else {
          scalars[k] = cur.read(prop.type);
        }
      }
      if (is_vertex) {
        out.vertices.emplace_back(scalars[ix], scalars[iy], scalars[iz]);
        if (has_color) {
          const bool bytes = el.props[ir].type == Scalar::kU8;
          const double s = bytes ? 1.0 / 255.0 : 1.0;
          out.colors.emplace_back(scalars[ir] * s, scalars[ig] * s, scalars[ib] * s);
        }
      } else if (is_face && iface >= 0) {
        triangulate(poly, out.faces);
      }
    }
  }
}

}  // namespace

GeometryFile read_ply(const fs::path& path) {
  const std::string data = read_file(path);
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string {
    const std::size_t e = data.find('\n', pos);
    if (e == std::string::npos) {
      bad_file(path, "PLY header not terminated");
    }
    std::string line = data.substr(pos, e - pos);
    pos = e + 1;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    return line;
  };
  if (next_line() != "ply") {
    bad_file(path, "missing 'ply' magic");
  }
  bool binary = false;
  std::vector<PlyElement> elements;
  while (true) {
    const std::string line = next_line();
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "end_header") {
      break;
    }
    if (kw == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "ascii") {
        binary = false;
      } else if (fmt == "binary_little_endian") {
        binary = true;
      } else {
        throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": PLY format '" + fmt + "'");
      }
    } else if (kw == "element") {
      PlyElement el;
      ls >> el.name >> el.count;
      elements.push_back(el);
    } else if (kw == "property") {
      if (elements.empty()) {
        bad_file(path, "property before element");
      }
      std::string t;
      ls >> t;
      PlyProperty prop;
      if (t == "list") {
        std::string ct, it;
        ls >> ct >> it >> prop.name;
        prop.is_list = true;
        prop.count_type = parse_scalar(ct, path);
        prop.type = parse_scalar(it, path);
      } else {
        prop.type = parse_scalar(t, path);
        ls >> prop.name;
      }
      elements.back().props.push_back(prop);
    }
  }
  GeometryFile out;
  if (binary) {
    BinaryCursor cur(data, pos, path);
    read_ply_body(cur, elements, out, path);
  } else {
    AsciiCursor cur(data, pos, path);
    read_ply_body(cur, elements, out, path);
  }
  return out;
}

GeometryFile read_obj(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  GeometryFile out;
  bool any_color = false;
  std::string line;
  std::vector<int> poly;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "v") {
      double x = 0, y = 0, z = 0;
      if (!(ls >> x >> y >> z)) {
        bad_file(path, "malformed vertex line");
      }
      out.vertices.emplace_back(x, y, z);
      double r = 0, g = 0, b = 0;
      if (ls >> r >> g >> b) {
        any_color = true;
        out.colors.emplace_back(r, g, b);
      } else {
        out.colors.emplace_back(0.0, 0.0, 0.0);
      }
    } else if (kw == "f") {
      poly.clear();
      std::string tok;
      while (ls >> tok) {
        const int idx = std::stoi(tok.substr(0, tok.find('/')));
        const int n = static_cast<int>(out.vertices.size());
        poly.push_back(idx < 0 ? n + idx : idx - 1);
      }
      triangulate(poly, out.faces);
    }
  }
  if (!any_color) {
    out.colors.clear();
  }
  return out;
}

GeometryFile read_geometry(const fs::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".ply") {
    return read_ply(path);
  }
  if (ext == ".obj") {
    return read_obj(path);
  }
  throw Error(ErrorCode::kUnsupportedFormat, path.string() + ": unsupported extension '" + ext + "'");
}

namespace {

void write_ply_impl(const fs::path& path, const std::vector<Point3>& verts,
                    const std::vector<Eigen::Vector3d>& colors, const std::vector<Face>& faces,
                    PlyEncoding enc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  const bool color = !colors.empty();
  out << "ply\nformat " << (enc == PlyEncoding::kAscii ? "ascii" : "binary_little_endian") << " 1.0\n";
  out << "element vertex " << verts.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  if (color) {
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  }
  if (!faces.empty()) {
    out << "element face " << faces.size() << "\n";
    out << "property list uchar int vertex_indices\n";
  }
  out << "end_header\n";
  auto to_byte = [](double c) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(c * 255.0), 0L, 255L));
  };
  if (enc == PlyEncoding::kAscii) {
    char buf[128];
    for (std::size_t i = 0; i < verts.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g", verts[i].x(), verts[i].y(), verts[i].z());
      out << buf;
      if (color) {
        out << ' ' << int(to_byte(colors[i].x())) << ' ' << int(to_byte(colors[i].y())) << ' '
            << int(to_byte(colors[i].z()));
      }
      out << '\n';
    }
    for (const auto& f : faces) {
      out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    }
  } else {
    static_assert(std::endian::native == std::endian::little, "binary PLY writer assumes little endian");
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const double xyz[3] = {verts[i].x(), verts[i].y(), verts[i].z()};
      out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
      if (color) {
        const std::uint8_t rgb[3] = {to_byte(colors[i].x()), to_byte(colors[i].y()), to_byte(colors[i].z())};
        out.write(reinterpret_cast<const char*>(rgb), sizeof(rgb));
      }
    }
    for (const auto& f : faces) {
      const std::uint8_t n = 3;
      out.write(reinterpret_cast<const char*>(&n), 1);
      const std::int32_t idx[3] = {f[0], f[1], f[2]};
      out.write(reinterpret_cast<const char*>(idx), sizeof(idx));
    }
  }
  if (!out) {
    throw Error(ErrorCode::kIo, "failed writing " + path.string());
  }
}

}  // namespace

void write_ply(const fs::path& path, const LabeledCloud& cloud, PlyEncoding enc) {
  write_ply_impl(path, cloud.points, cloud.colors, {}, enc);
}

void write_ply(const fs::path& path, const Mesh& mesh, PlyEncoding enc) {
  write_ply_impl(path, mesh.vertices, mesh.vertex_colors, mesh.faces, enc);
}

fs::path sidecar_path(const fs::path& geometry_path) {
  fs::path p = geometry_path;
  p.replace_extension(".labels");
  return p;
}

LoadedObject load_object(const fs::path& path, const LoadOptions& opts) {
  GeometryFile geo = read_geometry(path);
  if (geo.vertices.empty()) {
    throw Error(ErrorCode::kIo, path.string() + ": no vertices");
  }
  const fs::path lp = opts.labels_path.value_or(sidecar_path(path));
  std::optional<PartLabels> labels;
  if (opts.labels_path || fs::exists(lp)) {
    labels = read_labels(lp);
  }

  LoadedObject obj;
  if (!geo.faces.empty()) {
    Mesh mesh;
    mesh.vertices = std::move(geo.vertices);
    mesh.vertex_colors = std::move(geo.colors);
    mesh.faces = std::move(geo.faces);
    if (labels) {
      if (labels->labels.size() != mesh.faces.size()) {
        throw Error(ErrorCode::kLabelCountMismatch,
                    lp.string() + ": " + std::to_string(labels->labels.size()) + " labels for " +
                        std::to_string(mesh.faces.size()) + " faces");
      }
      mesh.face_labels = labels->labels;
      mesh.part_names = labels->part_names;
    }
    try {
      mesh.validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::kIo, path.string() + ": " + e.what());
    }
    obj.cloud = sample_surface(mesh, opts.sample_count, opts.seed);
    obj.mesh = std::move(mesh);
  } else {
    obj.cloud.points = std::move(geo.vertices);
    obj.cloud.colors = std::move(geo.colors);
    if (labels) {
      if (labels->labels.size() != obj.cloud.points.size()) {
        throw Error(ErrorCode::kLabelCountMismatch,
                    lp.string() + ": " + std::to_string(labels->labels.size()) + " labels for " +
                        std::to_string(obj.cloud.points.size()) + " points");
      }
      obj.cloud.labels = labels->labels;
      obj.cloud.part_names = labels->part_names;
    }
    try {
      obj.cloud.validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::kIo, path.string() + ": " + e.what());
    }
  }
  return obj;
}

}  // namespace cano::io
