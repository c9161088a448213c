#include "commands.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cano/annotation_service.hpp"
#include "cano/error.hpp"
#include "cano/export.hpp"
#include "cano/http_server.hpp"
#include "cano/metrics.hpp"
#include "cano/records.hpp"
#include "cano/registry.hpp"

namespace cano::cli {

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

std::vector<CandidateSet> generate_all(const std::vector<io::ObjectEntry>& entries, const TemplateRegistry& reg,
                                       const Settings& settings, std::ostream& log) {
  const PipelineConfig cfg = settings.pipeline();
  std::vector<CandidateSet> sets(entries.size());
  std::atomic<std::size_t> finished{0};
  parallel_for(entries.size(), settings.workers, [&](std::size_t i) {
    const PreparedObject obj = io::load_prepared_object(entries[i], settings.load_options());
    sets[i] = generate_candidates(obj, reg, cfg);
    finished.fetch_add(1);
  });
  std::size_t flagged = 0;
  for (const auto& s : sets) {
    flagged += (s.flags.semantic_unavailable || s.flags.no_stable_pose || s.flags.pca_degenerate) ? 1 : 0;
  }
  log << "generated " << finished.load() << " candidate sets (" << flagged << " with fallbacks)\n";
  return sets;
}

std::map<std::string, SymmetrySpec> symmetry_by_object(const EvaluateArgs& args, const Settings& settings) {
  std::map<std::string, SymmetrySpec> out;
  if (!args.manifest || !args.templates) {
    return out;
  }
  io::LoadOptions light = settings.load_options();
  light.sample_count = 64;  // only the symmetry specs are needed
  const TemplateRegistry reg = io::load_template_registry(*args.templates, light);
  for (const auto& e : io::read_object_manifest(*args.manifest)) {
    if (reg.contains(e.category)) {
      out[e.id] = reg.at(e.category).symmetry;
    }
  }
  return out;
}

}  // namespace

int run_preprocess(const PreprocessArgs& args, const Settings& settings, std::ostream& log) {
  const auto entries = io::read_object_manifest(args.manifest);
  const fs::path objects = args.out_dir / "objects";
  fs::create_directories(objects);
  std::vector<io::ObjectEntry> out_entries;
  nlohmann::json transforms = nlohmann::json::object();
  for (const auto& e : entries) {
    const PreparedObject obj = io::load_prepared_object(e, settings.load_options());
    io::ObjectEntry out{e.id, e.category, objects / (e.id + ".ply"), std::nullopt};
    io::write_ply(out.path, obj.cloud, io::PlyEncoding::kBinaryLittleEndian);
    if (obj.cloud.has_labels()) {
      out.labels = objects / (e.id + ".labels");
      io::write_labels(*out.labels, {obj.cloud.part_names, obj.cloud.labels});
    }
    if (obj.mesh) {
      io::write_ply(objects / (e.id + "_mesh.ply"), *obj.mesh, io::PlyEncoding::kBinaryLittleEndian);
    }
    const auto& t = obj.transform;
    transforms[e.id] = {{"translation", {t.translation.x(), t.translation.y(), t.translation.z()}},
                        {"scale", t.scale},
                        {"points", obj.cloud.size()},
                        {"parts", obj.cloud.part_names.size()}};
    out_entries.push_back(std::move(out));
  }
  io::write_object_manifest(args.out_dir / "manifest.json", out_entries);
  std::ofstream(args.out_dir / "transforms.json") << transforms.dump(2) << '\n';
  log << "preprocessed " << out_entries.size() << " objects into " << args.out_dir.string() << "\n";
  return 0;
}

int run_candidates(const CandidatesArgs& args, const Settings& settings, std::ostream& log) {
  const auto entries = io::read_object_manifest(args.manifest);
  const TemplateRegistry reg = io::load_template_registry(args.templates, settings.load_options());
  const auto sets = generate_all(entries, reg, settings, log);
  io::write_candidate_sets(args.out, sets);
  log << "wrote " << args.out.string() << "\n";
  return 0;
}

int run_serve(const ServeArgs& args, const Settings& settings, std::ostream& log) {
  const auto entries = io::read_object_manifest(args.manifest);
  auto reg = std::make_shared<TemplateRegistry>(io::load_template_registry(args.templates, settings.load_options()));

  std::map<std::string, CandidateSet> by_id;
  if (args.candidates) {
    for (auto& s : io::read_candidate_sets(*args.candidates)) {
      by_id[s.object_id] = std::move(s);
    }
  } else {
    for (auto& s : generate_all(entries, *reg, settings, log)) {
      by_id[s.object_id] = std::move(s);
    }
  }
  std::vector<ServiceObject> objects;
  for (const auto& e : entries) {
    const auto it = by_id.find(e.id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kInvalidInput, "no candidate set for object '" + e.id + "'");
    }
    const PreparedObject obj = io::load_prepared_object(e, settings.load_options());
    objects.push_back({e.id, e.category, it->second, obj.cloud});
  }

  ServiceOptions sopts;
  sopts.lease_seconds = settings.lease_seconds;
  AnnotationService service(std::move(objects), reg, args.log, sopts);
  if (service.repaired_bytes() > 0) {
    log << "repaired a partial trailing record (" << service.repaired_bytes() << " bytes) in "
        << args.log.string() << "\n";
  }
  HttpServer server(service, {args.host, args.port, args.static_dir});
  const int port = server.bind();
  log << "serving " << entries.size() << " objects (" << service.recovered_records()
      << " already annotated) on http://" << args.host << ":" << port << std::endl;

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::thread watcher([&] {
    while (!g_stop.load()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    server.stop();
  });
  server.listen();
  g_stop.store(true);
  watcher.join();
  return 0;
}

int run_evaluate(const EvaluateArgs& args, const Settings& settings, std::ostream& out) {
  std::map<std::string, Rotation> gt;
  for (const auto& r : io::read_pose_records(args.ground_truth)) {
    gt[r.object_id] = r.rotation;
  }
  const auto symmetry = symmetry_by_object(args, settings);
  std::vector<ErrorSample> samples;
  std::size_t missing = 0;
  for (const auto& p : io::read_pose_records(args.predictions)) {
    const auto it = gt.find(p.object_id);
    if (it == gt.end()) {
      ++missing;
      continue;
    }
    const auto s = symmetry.find(p.object_id);
    samples.push_back({p.object_id, p.rotation, it->second, s == symmetry.end() ? SymmetrySpec::none() : s->second});
  }
  if (samples.empty()) {
    throw Error(ErrorCode::kInvalidInput, "no prediction has a matching ground-truth pose");
  }
  const auto errors = errors_deg(samples);
  const double acc10 = accuracy_at(errors, 10.0);
  const double acc30 = accuracy_at(errors, 30.0);
  const double abs_err = mean_abs_error(errors);
  const double spread = iqr(errors);

  char line[160];
  out << "metric      value\n";
  std::snprintf(line, sizeof(line), "samples     %zu\nAcc@10      %.4f\nAcc@30      %.4f\nAbs(deg)    %.4f\nIQR(deg)    %.4f\n",
                samples.size(), acc10, acc30, abs_err, spread);
  out << line;
  if (missing > 0) {
    out << "unmatched   " << missing << "\n";
  }
  if (args.report) {
    nlohmann::json per_object = nlohmann::json::object();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      per_object[samples[i].object_id] = errors[i];
    }
    const nlohmann::json report{{"samples", samples.size()}, {"unmatched", missing},
                                {"acc_10", acc10},          {"acc_30", acc30},
                                {"abs_deg", abs_err},       {"iqr_deg", spread},
                                {"errors_deg", per_object}};
    std::ofstream(*args.report) << report.dump(2) << '\n';
  }
  return 0;
}

int run_export(const ExportArgs& args, const Settings& settings, std::ostream& out) {
  const auto entries = io::read_object_manifest(args.manifest);
  const auto sets = io::read_candidate_sets(args.candidates);
  const auto annotations = io::read_annotations(args.log);
  if (annotations.truncated_tail > 0) {
    out << "warning: ignored a partial trailing record in " << args.log.string() << "\n";
  }
  if (annotations.duplicates > 0) {
    out << "warning: " << annotations.duplicates << " superseded duplicate annotation(s)\n";
  }
  const auto summary = io::export_canonical(entries, sets, annotations, args.out_dir, settings.load_options());
  char line[160];
  std::snprintf(line, sizeof(line), "exported %zu of %zu objects (retained %.1f%%, quality discards %.1f%%, pose discards %.1f%%)\n",
                summary.exported, summary.objects, summary.stats.retained_pct, summary.stats.quality_discard_pct,
                summary.stats.pose_discard_pct);
  out << line;
  return 0;
}

}  // namespace cano::cli
