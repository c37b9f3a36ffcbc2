#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "goose/baselines.hpp"
#include "goose/experiment.hpp"
#include "goose/parallel.hpp"
#include "goose/worlds.hpp"

namespace {

using goose::ExperimentConfig;

// Times one kernel both ways and checks the outputs agree.
template <typename ParallelFn, typename SerialFn, typename CheckFn>
void bench_kernel(const std::string& name, ParallelFn par, SerialFn ser,
                  CheckFn check, int repeats) {
  using clock = std::chrono::steady_clock;
  auto time_it = [&](auto&& fn) {
    const auto t0 = clock::now();
    for (int r = 0; r < repeats; ++r) fn();
    return std::chrono::duration<double>(clock::now() - t0).count() /
           repeats;
  };
  const double ts = time_it(ser);
  const double tp = time_it(par);
  std::cout << "  " << name << ": serial " << ts * 1e3 << " ms, parallel "
            << tp * 1e3 << " ms, speedup " << (tp > 0 ? ts / tp : 0.0)
            << ", max |diff| " << check() << "\n";
}

int cmd_bench(const ExperimentConfig& cfg) {
  std::cout << "kernel benchmark (threads: " << goose::parallel::threads()
            << ")\n";
  goose::Rng rng(cfg.master_seed);

  // Workload mirrors the configured experiment's node universe.
  goose::KernelSpec kernel =
      goose::KernelSpec::rbf(cfg.resolved_lengthscale(), cfg.variance);
  Eigen::MatrixXd pts;
  if (cfg.is_bo()) {
    const int dim = cfg.experiment == "safe-bo-2d" ? 2 : 1;
    goose::BoWorld world = goose::sample_gp_world(
        dim, kernel, cfg.resolved_bo_points(), rng, cfg.noise_std);
    pts = world.graph.points();
  } else {
    goose::GridMdpWorld world =
        goose::sample_grid_world(cfg.grid_w, cfg.grid_h, rng);
    pts = world.graph.points();
  }
  const int n = static_cast<int>(pts.rows());
  std::cout << "  nodes: " << n << "\n";

  {
    Eigen::MatrixXd kp, ks;
    bench_kernel(
        "kernel_matrix",
        [&] { kp = goose::kernel_matrix(kernel, pts); },
        [&] { ks = goose::kernel_matrix_serial(kernel, pts); },
        [&] { return (kp - ks).cwiseAbs().maxCoeff(); }, 3);
  }

  {
    goose::PosteriorModel model(kernel, cfg.noise_std);
    const int t = std::min(120, n);
    for (int i = 0; i < t; ++i)
      model.observe(pts.row((i * 37) % n), rng.normal());
    Eigen::VectorXd mp, vp, ms, vs;
    bench_kernel(
        "posterior_batch",
        [&] { model.posterior_batch(pts, mp, vp); },
        [&] { model.posterior_batch_serial(pts, ms, vs); },
        [&] {
          return std::max((mp - ms).cwiseAbs().maxCoeff(),
                          (vp - vs).cwiseAbs().maxCoeff());
        },
        3);
  }

  {
    goose::DecisionGraph graph(pts);
    goose::SafeContext ctx;
    ctx.graph = &graph;
    ctx.kernel = kernel;
    ctx.mode = goose::SafeMode::lipschitz;
    ctx.lipschitz = 1.0;
    Eigen::VectorXd values(n);
    for (int i = 0; i < n; ++i) values(i) = rng.normal();
    std::vector<int> witnesses;
    for (int i = 0; i < n; i += 7) witnesses.push_back(i);
    goose::NodeSet rp, rsr;
    bench_kernel(
        "lipschitz_certified",
        [&] { rp = goose::lipschitz_certified(ctx, witnesses, values, 0.0); },
        [&] {
          rsr = goose::lipschitz_certified_serial(ctx, witnesses, values, 0.0);
        },
        [&] { return rp == rsr ? 0.0 : 1.0; }, 3);
  }
  return 0;
}

int cmd_run(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  goose::MetricsReport report = goose::run_experiment(cfg);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const std::vector<std::string> files = goose::emit_all_csv(report, cfg);
  goose::print_report(report, std::cout);
  std::cout << "elapsed: " << elapsed << " s\n";
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
  if (report.any_violation()) {
    std::cout << "SAFETY VIOLATION detected in " << report.violation_runs
              << " run(s)\n";
    if (cfg.strict) return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"goose: safe-exploration experiment harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  bool strict = false, full_scale = false, dump_worlds = false;
  int seeds_override = -1, threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "experiment config file")
        ->required();
    sub->add_option("--out", out_dir, "output directory for CSV files");
    sub->add_option("--seeds", seeds_override, "override the seed count");
    sub->add_flag("--strict", strict,
                  "exit nonzero on any safety violation");
    sub->add_flag("--full-scale", full_scale,
                  "paper-scale seeds and world sizes");
    sub->add_flag("--dump-worlds", dump_worlds,
                  "write generated worlds as node/edge tables");
    sub->add_option("--threads", threads, "kernel thread count (0 = auto)");
  };
  CLI::App* run = app.add_subcommand("run", "run an experiment");
  add_common(run);
  CLI::App* bench =
      app.add_subcommand("bench", "compare parallel and serial kernels");
  add_common(bench);

  CLI11_PARSE(app, argc, argv);

  try {
    goose::parallel::set_threads(threads);
    ExperimentConfig cfg = goose::parse_config_file(config_path);
    cfg.strict = strict;
    cfg.full_scale = full_scale;
    cfg.dump_worlds = dump_worlds;
    cfg.out_dir = out_dir;
    if (seeds_override > 0) cfg.seeds = seeds_override;
    if (app.got_subcommand(bench)) return cmd_bench(cfg);
    return cmd_run(cfg);
  } catch (const goose::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
