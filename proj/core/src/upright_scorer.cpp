#include <array>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "cano/error.hpp"
#include "cano/mesh_io.hpp"
#include "cano/stability.hpp"

namespace cano {

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

}  // namespace

ExternalCommandScorer::ExternalCommandScorer(std::string command, std::filesystem::path work_root)
    : command_(std::move(command)),
      work_root_(work_root.empty() ? std::filesystem::temp_directory_path() : std::move(work_root)) {}

std::vector<double> ExternalCommandScorer::score(const Mesh& mesh,
                                                 std::span<const SupportCandidate> candidates) {
  const std::lock_guard lock(mu_);
  static std::atomic<unsigned> invocation{0};
  const auto dir = work_root_ / ("cano_upright_" + std::to_string(::getpid()) + "_" +
                                 std::to_string(invocation.fetch_add(1)));
  std::filesystem::create_directories(dir);
  const auto manifest = dir / "manifest.txt";
  {
    std::ofstream m(manifest);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const std::string file = "candidate_" + std::to_string(i) + ".ply";
      io::write_ply(dir / file, rotate_mesh(mesh, candidates[i].rotation));
      m << i << ' ' << file << '\n';
    }
  }
  const std::string cmd = command_ + " " + shell_quote(dir.string()) + " " + shell_quote(manifest.string());
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    throw Error(ErrorCode::kExternalScorer, "cannot run '" + command_ + "'");
  }
  std::string output;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    output.append(buf.data(), n);
  }
  const int status = ::pclose(pipe);
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  if (status != 0) {
    throw Error(ErrorCode::kExternalScorer, "'" + command_ + "' exited with status " + std::to_string(status));
  }

  std::map<std::size_t, double> by_id;
  std::istringstream lines(output);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream ls(line);
    std::size_t id = 0;
    double s = 0.0;
    if (ls >> id >> s) {
      by_id[id] = s;
    }
  }
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto it = by_id.find(i);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kExternalScorer, "no score printed for candidate " + std::to_string(i));
    }
    scores[i] = it->second;
  }
  return scores;
}

}  // namespace cano
