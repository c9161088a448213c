#include <fstream>
#include <sstream>

#include "cano/error.hpp"
#include "cano/mesh_io.hpp"

namespace cano::io {

PartLabels read_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  PartLabels out;
  std::string line;
  if (!std::getline(in, line) || line.rfind("parts:", 0) != 0) {
    throw Error(ErrorCode::kIo, path.string() + ": missing 'parts:' header");
  }
  std::string names = line.substr(6);
  std::istringstream ns(names);
  std::string name;
  while (std::getline(ns, name, ',')) {
    const auto b = name.find_first_not_of(" \t\r");
    const auto e = name.find_last_not_of(" \t\r");
    if (b != std::string::npos) {
      out.part_names.push_back(name.substr(b, e - b + 1));
    }
  }
  const int m = static_cast<int>(out.part_names.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    int v = 0;
    std::istringstream ls(line);
    if (!(ls >> v) || v < 0 || v >= m) {
      throw Error(ErrorCode::kIo, path.string() + ":" + std::to_string(line_no) + ": bad label '" + line + "'");
    }
    out.labels.push_back(v);
  }
  return out;
}

void write_labels(const fs::path& path, const PartLabels& labels) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  out << "parts: ";
  for (std::size_t i = 0; i < labels.part_names.size(); ++i) {
    out << (i ? "," : "") << labels.part_names[i];
  }
  out << '\n';
  for (const int l : labels.labels) {
    out << l << '\n';
  }
}

}  // namespace cano::io
