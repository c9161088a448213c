#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cano/annotation_log.hpp"
#include "cano/candidates.hpp"
#include "cano/template.hpp"

namespace cano {

/// Milliseconds since the unix epoch.
using Clock = std::function<std::int64_t()>;
Clock system_clock_ms();

/// An object as the service dispatches it.
struct ServiceObject {
  std::string id;
  std::string category;
  CandidateSet candidates;
  LabeledCloud preview;  // normalized object cloud, already decimated for transfer
};

struct Lease {
  std::string object_id;
  std::string annotator_id;
  std::int64_t issued_ms = 0;
  std::int64_t expires_ms = 0;
  std::uint64_t serial = 0;  // unique per issuance within one service instance
};

struct ServiceOptions {
  double lease_seconds = 120.0;
  bool sync_log = true;
  std::size_t preview_points = 4096;
};

/// What next_item() returns when nothing can be dispatched right now.
struct NoneRemaining {
  /// Milliseconds until the earliest live lease expires; empty when every
  /// object is annotated.
  std::optional<std::int64_t> retry_after_ms;
};

/// Lease-based dispatch of objects to annotators, backed by an append-only log.
///
/// The log is the source of truth: on construction every object with a record
/// matching its current candidate set counts as done. Leases live in memory
/// only and are lost on restart.
class AnnotationService {
 public:
  AnnotationService(std::vector<ServiceObject> objects, std::shared_ptr<const TemplateRegistry> templates,
                    const std::filesystem::path& log_path, ServiceOptions opts = {}, Clock clock = system_clock_ms());

  /// Returns the annotator's current live lease if it has one, otherwise leases
  /// the first object in manifest order that is neither done nor leased.
  std::variant<Lease, NoneRemaining> next_item(const std::string& annotator_id);

  /// `decision` is a candidate tag or "discard" (with `reason`). Throws
  /// stale-lease unless the annotator holds a live lease on the object,
  /// invalid-decision for unknown tags/reasons and invalid-input for unknown objects.
  io::AnnotationRecord submit(const std::string& annotator_id, const std::string& object_id,
                              const std::string& decision, const std::string& reason, std::int64_t elapsed_ms);

  io::AnnotationStats stats() const;

  struct Progress {
    std::size_t total = 0;
    std::size_t done = 0;
    std::size_t leased = 0;
  };
  Progress progress() const;

  /// Throws invalid-input for unknown ids.
  const ServiceObject& object(const std::string& id) const;
  /// Template of the object's category, if registered.
  const CategoryTemplate* template_for(const std::string& category) const;

  /// Every lease issued by this instance, in issue order.
  std::vector<Lease> lease_history() const;
  std::size_t recovered_records() const { return recovered_records_; }
  std::size_t repaired_bytes() const { return log_.repaired_bytes(); }

 private:
  std::vector<ServiceObject> objects_;
  std::map<std::string, std::size_t> index_;
  std::shared_ptr<const TemplateRegistry> templates_;
  ServiceOptions opts_;
  Clock clock_;
  io::AnnotationLog log_;

  mutable std::mutex mu_;
  std::vector<bool> done_;
  std::map<std::string, Lease> leases_;  // object id -> lease (possibly expired)
  std::vector<io::AnnotationRecord> records_;
  std::map<std::string, std::size_t> record_slot_;
  std::vector<Lease> history_;
  std::uint64_t next_serial_ = 1;
  std::size_t first_open_ = 0;
  std::size_t recovered_records_ = 0;
};

}  // namespace cano
