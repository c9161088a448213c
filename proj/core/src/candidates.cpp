#include "cano/candidates.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "cano/error.hpp"

namespace cano {

namespace {

constexpr std::array<std::string_view, 5> kTagNames{"HS", "HG", "HG_FLIP", "SUP_HS", "PCA_HS"};

Candidate make(Tag tag, const Rotation& r, std::map<std::string, double> diag = {}) {
  return Candidate{tag, r, std::move(diag)};
}

struct SemanticResult {
  Rotation rotation;
  std::map<std::string, double> diagnostics;
};

// Horizontal semantic solve on `cloud`, reusing its geometric profile.
SemanticResult semantic_on(const LabeledCloud& cloud, const CategoryTemplate& tmpl, const CriterionConfig& cfg,
                           const EnergyProfile* profile) {
  const SemanticAlignment s = profile != nullptr ? horizontal_semantic(cloud, tmpl, cfg, *profile)
                                                 : horizontal_semantic(cloud, tmpl, cfg);
  return {s.r_s,
          {{"theta_deg", rad2deg(s.theta)},
           {"e_s", s.semantic_energy},
           {"objective", s.objective},
           {"parts_used", static_cast<double>(s.parts_used)}}};
}

}  // namespace

std::string_view to_string(Tag tag) { return kTagNames[static_cast<std::size_t>(tag)]; }

std::optional<Tag> parse_tag(std::string_view text) {
  for (std::size_t i = 0; i < kTagNames.size(); ++i) {
    if (kTagNames[i] == text) {
      return kAllTags[i];
    }
  }
  return std::nullopt;
}

std::string CandidateSet::canonical_text() const {
  std::string out = object_id + "\n";
  char buf[128];
  for (const auto& c : candidates) {
    const auto q = c.rotation.wxyz();
    std::snprintf(buf, sizeof(buf), " %.17g %.17g %.17g %.17g\n", q[0], q[1], q[2], q[3]);
    out += to_string(c.tag);
    out += buf;
  }
  return out;
}

std::string CandidateSet::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_text()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PreparedObject prepare_object(std::string object_id, std::string category, std::optional<Mesh> mesh,
                              const LabeledCloud& cloud) {
  PreparedObject out;
  out.object_id = std::move(object_id);
  out.category = std::move(category);
  std::tie(out.cloud, out.transform) = normalize_to_unit_sphere(cloud);
  if (mesh) {
    for (auto& v : mesh->vertices) {
      v = out.transform.apply(v);
    }
    out.mesh = std::move(mesh);
  }
  return out;
}

CandidateSet generate_candidates(const PreparedObject& object, const CategoryTemplate& tmpl,
                                 const PipelineConfig& cfg) {
  cfg.criteria.validate();
  object.cloud.validate();
  CandidateSet set;
  set.object_id = object.object_id;
  set.category = object.category.empty() ? tmpl.category : object.category;
  const LabeledCloud& cloud = object.cloud;

  // Horizontal branches on the raw cloud.
  const GeometricAlignment g = horizontal_geometric(cloud, tmpl, cfg.criteria);
  set.flags.continuous_symmetry = g.continuous_symmetry;
  const std::map<std::string, double> g_diag{{"theta_deg", rad2deg(g.theta)},
                                             {"e_g", g.energy},
                                             {"continuous_symmetry", g.continuous_symmetry ? 1.0 : 0.0}};
  set.candidates[1] = make(Tag::kHG, g.r_g, g_diag);
  set.candidates[2] = make(Tag::kHGFlip, g.r_invg,
                           {{"theta_deg", rad2deg(wrap_angle(g.theta + std::numbers::pi))}});

  try {
    const SemanticResult s = semantic_on(cloud, tmpl, cfg.criteria, &g.profile);
    set.candidates[0] = make(Tag::kHS, s.rotation, s.diagnostics);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSemanticUnavailable) {
      throw;
    }
    set.flags.semantic_unavailable = true;
    auto diag = g_diag;
    diag["fallback"] = 1.0;
    set.candidates[0] = make(Tag::kHS, g.r_g, diag);
  }
  const Candidate& hs = set.candidates[0];

  // Vertical branch: support surface, then horizontal semantic.
  try {
    HeuristicUprightScorer heuristic;
    UprightScorer& scorer = cfg.scorer ? *cfg.scorer : heuristic;
    std::vector<SupportCandidate> supports;
    Mesh scored_mesh;
    if (object.mesh) {
      supports = support_candidates(*object.mesh, cfg.stability);
      scored_mesh = *object.mesh;
    } else {
      supports = support_candidates(cloud.points, centroid(cloud.points), cfg.stability);
      scored_mesh.vertices = cloud.points;
    }
    const UprightSelection up = select_upright(supports, scorer, scored_mesh);
    std::map<std::string, double> diag{{"support_index", static_cast<double>(up.index)},
                                       {"upright_score", up.score},
                                       {"com_margin", supports[up.index].com_margin},
                                       {"support_area", supports[up.index].support_area}};
    Rotation r = up.rotation;
    if (!set.flags.semantic_unavailable) {
      const SemanticResult s = semantic_on(rotate(cloud, up.rotation), tmpl, cfg.criteria, nullptr);
      r = s.rotation * up.rotation;
      diag.insert(s.diagnostics.begin(), s.diagnostics.end());
    }
    set.candidates[3] = make(Tag::kSupHS, r, std::move(diag));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoStablePose && e.code() != ErrorCode::kDegenerateGeometry) {
      throw;
    }
    set.flags.no_stable_pose = true;
    auto diag = hs.diagnostics;
    diag["fallback"] = 1.0;
    set.candidates[3] = make(Tag::kSupHS, hs.rotation, std::move(diag));
  }

  // Vertical branch: PCA with polarity resolution, then horizontal semantic.
  try {
    const PcaAlignment p = set.flags.semantic_unavailable
                               ? pca_align_geometric(cloud, tmpl, cfg.pca_gap_tolerance)
                               : pca_align(cloud, tmpl, cfg.pca_gap_tolerance);
    std::map<std::string, double> diag{{"pca_chosen", static_cast<double>(p.chosen)},
                                       {"pca_ambiguous", p.ambiguous ? 1.0 : 0.0}};
    for (std::size_t i = 0; i < 4; ++i) {
      diag["pca_cost_" + std::to_string(i)] = p.costs[i];
    }
    Rotation r = p.r_pca;
    if (!set.flags.semantic_unavailable) {
      const SemanticResult s = semantic_on(rotate(cloud, p.r_pca), tmpl, cfg.criteria, nullptr);
      r = s.rotation * p.r_pca;
      diag.insert(s.diagnostics.begin(), s.diagnostics.end());
    }
    set.candidates[4] = make(Tag::kPcaHS, r, std::move(diag));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPcaDegenerate) {
      throw;
    }
    set.flags.pca_degenerate = true;
    auto diag = hs.diagnostics;
    diag["fallback"] = 1.0;
    set.candidates[4] = make(Tag::kPcaHS, hs.rotation, std::move(diag));
  }
  return set;
}

CandidateSet generate_candidates(const PreparedObject& object, const TemplateRegistry& registry,
                                 const PipelineConfig& cfg) {
  return generate_candidates(object, registry.at(object.category), cfg);
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      task(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) {
          return;
        }
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) {
            error = std::current_exception();
          }
          failed.store(true);
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

}  // namespace cano
