#include "cano/annotation_log.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json_util.hpp"

namespace cano::io {

namespace {

using detail::field;
using detail::json;

constexpr std::array<std::string_view, 5> kReasons{"quality-thin-shell", "quality-meaningless",
                                                   "quality-incomplete", "misclassified",
                                                   "pose-error-none-correct"};
constexpr std::string_view kOtherPrefix = "other:";

std::string errno_text() { return std::strerror(errno); }

// Offset just past the last newline of the file, or 0.
off_t last_line_end(int fd, off_t size) {
  std::array<char, 4096> buf{};
  off_t end = size;
  while (end > 0) {
    const off_t start = end > static_cast<off_t>(buf.size()) ? end - static_cast<off_t>(buf.size()) : 0;
    const auto len = static_cast<std::size_t>(end - start);
    if (::pread(fd, buf.data(), len, start) != static_cast<ssize_t>(len)) {
      throw Error(ErrorCode::kIo, "read failed: " + errno_text());
    }
    for (std::size_t i = len; i > 0; --i) {
      if (buf[i - 1] == '\n') {
        return start + static_cast<off_t>(i);
      }
    }
    end = start;
  }
  return 0;
}

}  // namespace

bool is_valid_discard_reason(std::string_view reason) {
  for (const auto r : kReasons) {
    if (reason == r) {
      return true;
    }
  }
  return reason.size() > kOtherPrefix.size() && reason.substr(0, kOtherPrefix.size()) == kOtherPrefix;
}

bool is_pose_discard(std::string_view reason) { return reason == "pose-error-none-correct"; }

void AnnotationRecord::validate() const {
  if (object_id.empty()) {
    throw Error(ErrorCode::kInvalidDecision, "annotation without object id");
  }
  if (selected && !discard_reason.empty()) {
    throw Error(ErrorCode::kInvalidDecision, "a selection cannot carry a discard reason");
  }
  if (!selected && !is_valid_discard_reason(discard_reason)) {
    throw Error(ErrorCode::kInvalidDecision, "invalid discard reason '" + discard_reason + "'");
  }
  if (elapsed_ms < 0) {
    throw Error(ErrorCode::kInvalidDecision, "negative elapsed_ms");
  }
}

std::string format_annotation(const AnnotationRecord& rec) {
  json j{{"object_id", rec.object_id},
         {"decision", rec.selected ? std::string(to_string(*rec.selected)) : std::string("discard")}};
  if (!rec.selected) {
    j["discard_reason"] = rec.discard_reason;
  }
  j["annotator_id"] = rec.annotator_id;
  j["elapsed_ms"] = rec.elapsed_ms;
  j["timestamp"] = rec.timestamp_ms;
  j["candidate_set_hash"] = rec.candidate_set_hash;
  return j.dump();
}

AnnotationRecord parse_annotation(std::string_view line) {
  const json j = detail::parse_json(line, "annotation");
  AnnotationRecord rec;
  rec.object_id = field<std::string>(j, "object_id", "annotation");
  const std::string where = "annotation '" + rec.object_id + "'";
  const auto decision = field<std::string>(j, "decision", where);
  if (decision != "discard") {
    rec.selected = parse_tag(decision);
    if (!rec.selected) {
      throw Error(ErrorCode::kIo, where + ": unknown decision '" + decision + "'");
    }
  } else {
    rec.discard_reason = field<std::string>(j, "discard_reason", where);
  }
  rec.annotator_id = field<std::string>(j, "annotator_id", where);
  rec.elapsed_ms = field<std::int64_t>(j, "elapsed_ms", where);
  rec.timestamp_ms = field<std::int64_t>(j, "timestamp", where);
  rec.candidate_set_hash = field<std::string>(j, "candidate_set_hash", where);
  try {
    rec.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kIo, where + ": " + e.what());
  }
  return rec;
}

AnnotationLog::AnnotationLog(const fs::path& path, bool sync) : path_(path), sync_(sync) {
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string() + ": " + errno_text());
  }
  struct stat st {};
  if (::fstat(fd_, &st) != 0) {
    ::close(fd_);
    throw Error(ErrorCode::kIo, "cannot stat " + path.string() + ": " + errno_text());
  }
  const off_t keep = last_line_end(fd_, st.st_size);
  if (keep != st.st_size) {
    if (::ftruncate(fd_, keep) != 0) {
      ::close(fd_);
      throw Error(ErrorCode::kIo, "cannot repair " + path.string() + ": " + errno_text());
    }
    repaired_bytes_ = static_cast<std::size_t>(st.st_size - keep);
  }
}

AnnotationLog::~AnnotationLog() {
  if (fd_ >= 0) {
    ::close(fd_);
  }
}

void AnnotationLog::append(const AnnotationRecord& rec) {
  rec.validate();
  const std::string line = format_annotation(rec) + "\n";
  std::lock_guard lock(mu_);
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      throw Error(ErrorCode::kIo, "append to " + path_.string() + " failed: " + errno_text());
    }
    done += static_cast<std::size_t>(n);
  }
  if (sync_ && ::fdatasync(fd_) != 0) {
    throw Error(ErrorCode::kIo, "sync of " + path_.string() + " failed: " + errno_text());
  }
}

AnnotationReadResult read_annotations(const fs::path& path) {
  AnnotationReadResult out;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!fs::exists(path)) {
      return out;
    }
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string data = ss.str();

  std::unordered_map<std::string, std::size_t> slot;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < data.size()) {
    const std::size_t nl = data.find('\n', pos);
    if (nl == std::string::npos) {
      out.truncated_tail = 1;
      break;
    }
    ++line_no;
    std::string_view line(data.data() + pos, nl - pos);
    pos = nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      continue;
    }
    AnnotationRecord rec;
    try {
      rec = parse_annotation(line);
    } catch (const Error& e) {
      throw Error(ErrorCode::kIo, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    const auto [it, fresh] = slot.emplace(rec.object_id, out.effective.size());
    if (fresh) {
      out.effective.push_back(rec);
    } else {
      ++out.duplicates;
      out.effective[it->second] = rec;
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

AnnotationStats compute_stats(std::span<const AnnotationRecord> records) {
  AnnotationStats s;
  for (const Tag t : kAllTags) {
    s.tag_counts[std::string(to_string(t))] = 0;
  }
  std::map<std::string, double> elapsed;
  for (const auto& r : records) {
    ++s.total;
    if (r.selected) {
      ++s.retained;
      ++s.tag_counts[std::string(to_string(*r.selected))];
    } else {
      ++s.discard_reasons[r.discard_reason];
      if (is_pose_discard(r.discard_reason)) {
        ++s.pose_discards;
      } else {
        ++s.quality_discards;
      }
    }
    auto& a = s.annotators[r.annotator_id];
    ++a.count;
    elapsed[r.annotator_id] += static_cast<double>(r.elapsed_ms) / 1000.0;
  }
  for (auto& [id, a] : s.annotators) {
    a.mean_elapsed_s = elapsed[id] / static_cast<double>(a.count);
  }
  const auto pct = [&](std::size_t n) { return s.total ? 100.0 * static_cast<double>(n) / static_cast<double>(s.total) : 0.0; };
  s.retained_pct = pct(s.retained);
  s.quality_discard_pct = pct(s.quality_discards);
  s.pose_discard_pct = pct(s.pose_discards);
  for (const auto& [tag, n] : s.tag_counts) {
    s.tag_pct[tag] = pct(n);
  }
  return s;
}

}  // namespace cano::io
