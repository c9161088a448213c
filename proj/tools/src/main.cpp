#include <iostream>

#include <CLI11.hpp>

#include "cano/error.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace cano::cli;
  CLI::App app{"cano: candidate canonical poses, annotation service and evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  Settings overrides;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);

  // Flags override the config file; remember which were given.
  auto* sample_count = app.add_option("--sample-count", overrides.sample_count, "surface samples per mesh");
  auto* seed = app.add_option("--seed", overrides.seed, "surface sampling seed");
  auto* grid = app.add_option("--grid-step", overrides.grid_step_deg, "yaw grid step in degrees");
  auto* sigma = app.add_option("--sigma", overrides.sigma, "Gaussian width around geometric minima, radians");
  auto* search = app.add_option("--max-search-points", overrides.max_search_points, "points per cloud in yaw search");
  auto* lease = app.add_option("--lease-seconds", overrides.lease_seconds, "annotation lease duration");
  auto* workers = app.add_option("--workers", overrides.workers, "worker threads for candidate generation");
  auto* scorer = app.add_option("--scorer-command", overrides.scorer_command, "external upright scorer program");

  PreprocessArgs pre;
  auto* cmd_pre = app.add_subcommand("preprocess", "normalize objects to the unit sphere");
  cmd_pre->add_option("--manifest", pre.manifest, "object manifest")->required()->check(CLI::ExistingFile);
  cmd_pre->add_option("--out", pre.out_dir, "output directory")->required();

  CandidatesArgs cand;
  auto* cmd_cand = app.add_subcommand("candidates", "generate five candidate rotations per object");
  cmd_cand->add_option("--manifest", cand.manifest, "object manifest")->required()->check(CLI::ExistingFile);
  cmd_cand->add_option("--templates", cand.templates, "template registry")->required()->check(CLI::ExistingFile);
  cmd_cand->add_option("--out", cand.out, "candidate sets (JSON lines)")->required();

  ServeArgs serve;
  auto* cmd_serve = app.add_subcommand("serve", "run the annotation service");
  cmd_serve->add_option("--manifest", serve.manifest, "object manifest")->required()->check(CLI::ExistingFile);
  cmd_serve->add_option("--templates", serve.templates, "template registry")->required()->check(CLI::ExistingFile);
  cmd_serve->add_option("--log", serve.log, "annotation log (JSON lines, appended)")->required();
  cmd_serve->add_option("--candidates", serve.candidates, "precomputed candidate sets")->check(CLI::ExistingFile);
  cmd_serve->add_option("--static", serve.static_dir, "UI bundle served at /")->check(CLI::ExistingDirectory);
  cmd_serve->add_option("--host", serve.host, "bind address");
  cmd_serve->add_option("--port", serve.port, "port (0 picks a free one)");

  EvaluateArgs eval;
  auto* cmd_eval = app.add_subcommand("evaluate", "pose accuracy metrics");
  cmd_eval->add_option("--predictions", eval.predictions, "predicted poses")->required()->check(CLI::ExistingFile);
  cmd_eval->add_option("--ground-truth", eval.ground_truth, "ground-truth poses")->required()->check(CLI::ExistingFile);
  cmd_eval->add_option("--manifest", eval.manifest, "object manifest, for symmetry lookup")->check(CLI::ExistingFile);
  cmd_eval->add_option("--templates", eval.templates, "template registry, for symmetry lookup")->check(CLI::ExistingFile);
  cmd_eval->add_option("--report", eval.report, "machine-readable report (JSON)");

  ExportArgs exp;
  auto* cmd_exp = app.add_subcommand("export", "write the canonicalized dataset");
  cmd_exp->add_option("--manifest", exp.manifest, "object manifest")->required()->check(CLI::ExistingFile);
  cmd_exp->add_option("--candidates", exp.candidates, "candidate sets")->required()->check(CLI::ExistingFile);
  cmd_exp->add_option("--log", exp.log, "annotation log")->required();
  cmd_exp->add_option("--out", exp.out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    Settings s = config_path.empty() ? Settings{} : load_settings(config_path);
    if (*sample_count) s.sample_count = overrides.sample_count;
    if (*seed) s.seed = overrides.seed;
    if (*grid) s.grid_step_deg = overrides.grid_step_deg;
    if (*sigma) s.sigma = overrides.sigma;
    if (*search) s.max_search_points = overrides.max_search_points;
    if (*lease) s.lease_seconds = overrides.lease_seconds;
    if (*workers) s.workers = overrides.workers;
    if (*scorer) s.scorer_command = overrides.scorer_command;

    if (*cmd_pre) return run_preprocess(pre, s, std::cerr);
    if (*cmd_cand) return run_candidates(cand, s, std::cerr);
    if (*cmd_serve) return run_serve(serve, s, std::cerr);
    if (*cmd_eval) return run_evaluate(eval, s, std::cout);
    if (*cmd_exp) return run_export(exp, s, std::cout);
  } catch (const cano::Error& e) {
    std::cerr << "cano: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cano: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
