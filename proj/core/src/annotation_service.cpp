#include "cano/annotation_service.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cano/error.hpp"

namespace cano {

Clock system_clock_ms() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

AnnotationService::AnnotationService(std::vector<ServiceObject> objects,
                                     std::shared_ptr<const TemplateRegistry> templates, const std::filesystem::path& log_path,
                                     ServiceOptions opts, Clock clock)
    : objects_(std::move(objects)), templates_(std::move(templates)), opts_(opts), clock_(std::move(clock)),
      log_(log_path, opts.sync_log) {
  if (!(opts_.lease_seconds > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "lease duration must be positive");
  }
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (!index_.emplace(objects_[i].id, i).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate object id '" + objects_[i].id + "'");
    }
    objects_[i].preview = subsample(objects_[i].preview, opts_.preview_points);
  }
  done_.assign(objects_.size(), false);

  const io::AnnotationReadResult existing = io::read_annotations(log_path);
  for (const auto& rec : existing.effective) {
    const auto it = index_.find(rec.object_id);
    if (it == index_.end() || rec.candidate_set_hash != objects_[it->second].candidates.hash()) {
      continue;  // unknown object or made against other candidates: dispatch again
    }
    done_[it->second] = true;
    record_slot_[rec.object_id] = records_.size();
    records_.push_back(rec);
  }
  recovered_records_ = records_.size();
}

std::variant<Lease, NoneRemaining> AnnotationService::next_item(const std::string& annotator_id) {
  if (annotator_id.empty()) {
    throw Error(ErrorCode::kInvalidInput, "annotator id is required");
  }
  const auto lease_ms = static_cast<std::int64_t>(std::llround(opts_.lease_seconds * 1000.0));
  std::lock_guard lock(mu_);
  const std::int64_t now = clock_();  // read under the lock so issue times are monotone

  for (auto& [id, lease] : leases_) {
    if (lease.annotator_id == annotator_id && lease.expires_ms > now && !done_[index_.at(id)]) {
      return lease;
    }
  }
  while (first_open_ < objects_.size() && done_[first_open_]) {
    ++first_open_;
  }
  std::optional<std::int64_t> earliest_expiry;
  for (std::size_t i = first_open_; i < objects_.size(); ++i) {
    if (done_[i]) {
      continue;
    }
    const std::string& id = objects_[i].id;
    const auto it = leases_.find(id);
    if (it != leases_.end() && it->second.expires_ms > now) {
      earliest_expiry = std::min(earliest_expiry.value_or(it->second.expires_ms), it->second.expires_ms);
      continue;
    }
    Lease lease{id, annotator_id, now, now + lease_ms, next_serial_++};
    leases_[id] = lease;
    history_.push_back(lease);
    return lease;
  }
  NoneRemaining none;
  if (earliest_expiry) {
    none.retry_after_ms = std::max<std::int64_t>(0, *earliest_expiry - now);
  }
  return none;
}

io::AnnotationRecord AnnotationService::submit(const std::string& annotator_id, const std::string& object_id,
                                               const std::string& decision, const std::string& reason,
                                               std::int64_t elapsed_ms) {
  const auto idx = index_.find(object_id);
  if (idx == index_.end()) {
    throw Error(ErrorCode::kInvalidInput, "unknown object '" + object_id + "'");
  }
  io::AnnotationRecord rec;
  rec.object_id = object_id;
  rec.annotator_id = annotator_id;
  rec.elapsed_ms = elapsed_ms;
  rec.candidate_set_hash = objects_[idx->second].candidates.hash();
  if (decision == "discard") {
    rec.discard_reason = reason;
  } else {
    rec.selected = parse_tag(decision);
    if (!rec.selected) {
      throw Error(ErrorCode::kInvalidDecision, "unknown decision '" + decision + "'");
    }
    if (!reason.empty()) {
      throw Error(ErrorCode::kInvalidDecision, "a selection cannot carry a discard reason");
    }
  }
  rec.validate();

  std::lock_guard lock(mu_);
  const std::int64_t now = clock_();
  const auto it = leases_.find(object_id);
  if (it == leases_.end() || it->second.annotator_id != annotator_id || it->second.expires_ms <= now ||
      done_[idx->second]) {
    throw Error(ErrorCode::kStaleLease, "no live lease on '" + object_id + "' for '" + annotator_id + "'");
  }
  rec.timestamp_ms = now;
  log_.append(rec);
  leases_.erase(it);
  done_[idx->second] = true;
  const auto [slot, fresh] = record_slot_.emplace(object_id, records_.size());
  if (fresh) {
    records_.push_back(rec);
  } else {
    records_[slot->second] = rec;
  }
  return rec;
}

io::AnnotationStats AnnotationService::stats() const {
  std::lock_guard lock(mu_);
  return io::compute_stats(records_);
}

AnnotationService::Progress AnnotationService::progress() const {
  std::lock_guard lock(mu_);
  const std::int64_t now = clock_();
  Progress p;
  p.total = objects_.size();
  p.done = static_cast<std::size_t>(std::count(done_.begin(), done_.end(), true));
  for (const auto& [id, lease] : leases_) {
    if (lease.expires_ms > now && !done_[index_.at(id)]) {
      ++p.leased;
    }
  }
  return p;
}

const ServiceObject& AnnotationService::object(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(ErrorCode::kInvalidInput, "unknown object '" + id + "'");
  }
  return objects_[it->second];
}

const CategoryTemplate* AnnotationService::template_for(const std::string& category) const {
  if (!templates_ || !templates_->contains(category)) {
    return nullptr;
  }
  return &templates_->at(category);
}

std::vector<Lease> AnnotationService::lease_history() const {
  std::lock_guard lock(mu_);
  return history_;
}

}  // namespace cano
