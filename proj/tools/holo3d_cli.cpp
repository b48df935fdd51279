// holo3d: command-line front end.
//
// Exit codes: 0 success, 2 user/config error, 3 data-consistency error,
// 4 numerical divergence, 1 anything else.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holo3d/core.hpp"
#include "holo3d/io.hpp"
#include "holo3d/metrics.hpp"
#include "holo3d/phantoms.hpp"
#include "holo3d/propagation.hpp"
#include "holo3d/solver.hpp"

namespace {

using namespace holo3d;

constexpr int kExitOk = 0;
constexpr int kExitUser = 2;
constexpr int kExitConsistency = 3;
constexpr int kExitDivergence = 4;

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

io::RunConfig load_config(const CommonOptions& common) {
  io::RunConfig cfg = common.config.empty() ? io::RunConfig{} : io::load_run_config(common.config);
  if (common.seed) cfg.solver.seed = *common.seed;
  return cfg;
}

void require_out(const CommonOptions& common) {
  if (common.out.empty()) throw ConfigError("--out is required");
}

void say(const CommonOptions& common, const std::string& text) {
  if (!common.quiet) std::cout << text << '\n';
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

int cmd_phantom(const CommonOptions& common) {
  const io::RunConfig cfg = load_config(common);
  require_out(common);
  const OpticalSetup setup = cfg.optics.setup();
  const Volume volume = make_phantom(cfg.phantom, setup);
  io::write_volume(common.out, volume, setup);
  if (!common.quiet) std::cout << io::serialize_run_config(cfg);
  return kExitOk;
}

int cmd_forward(const CommonOptions& common, const std::string& input) {
  const io::RunConfig cfg = load_config(common);
  require_out(common);
  const OpticalSetup setup = cfg.optics.setup();
  const io::VolumeFile in = io::read_volume(input);
  io::check_consistent(in.header, setup);
  const PropagatorPlan plan(setup, cfg.optics.propagator());
  io::write_field(common.out, forward(in.volume, plan), setup);
  say(common, "wrote field " + io::paths_for(common.out).header.string());
  return kExitOk;
}

int cmd_backproject(const CommonOptions& common, const std::string& input) {
  const io::RunConfig cfg = load_config(common);
  require_out(common);
  const OpticalSetup setup = cfg.optics.setup();
  const io::FieldFile in = io::read_field(input);
  io::check_consistent(in.header, setup);
  const PropagatorPlan plan(setup, cfg.optics.propagator());
  io::write_volume(common.out, backproject(in.field, plan), setup);
  say(common, "wrote volume " + io::paths_for(common.out).header.string());
  return kExitOk;
}

int cmd_reconstruct(const CommonOptions& common, const std::string& input, std::string truth_path,
                    std::string report_path) {
  const io::RunConfig cfg = load_config(common);
  const SolverConfig solver = cfg.solver.to_config();
  require_out(common);
  if (truth_path.empty()) truth_path = cfg.io.truth;
  if (report_path.empty()) report_path = cfg.io.report;

  const OpticalSetup setup = cfg.optics.setup();
  const io::FieldFile in = io::read_field(input);
  io::check_consistent(in.header, setup);
  std::optional<io::VolumeFile> truth;
  if (!truth_path.empty()) {
    truth = io::read_volume(truth_path);
    io::check_consistent(truth->header, setup);
  }
  const PropagatorPlan plan(setup, cfg.optics.propagator());
  const Reconstruction result = fista(in.field, plan, solver, std::nullopt, truth ? &truth->volume : nullptr);

  std::optional<double> data_error;
  if (frobenius_norm(in.field) > 0.0) data_error = data_domain_error(in.field, result.estimate, plan);
  std::optional<double> object_error;
  if (truth) object_error = object_domain_error(truth->volume, result.estimate);

  io::write_volume(common.out, result.estimate, setup);
  if (!report_path.empty()) io::write_file_atomic(report_path, io::serialize_report(result.report, data_error, object_error));

  std::string summary = "iterations " + std::to_string(result.report.iterations_run) + "  kappa " +
                        fmt(result.report.kappa);
  if (data_error) summary += "  data_error " + fmt(*data_error);
  if (object_error) summary += "  object_error " + fmt(*object_error);
  summary += "  time " + fmt(result.report.wall_time_seconds) + " s";
  say(common, summary);
  return kExitOk;
}

int cmd_adjoint_test(const CommonOptions& common, int trials, bool corrupt) {
  const io::RunConfig cfg = load_config(common);
  if (trials < 1) throw ConfigError("--trials must be >= 1");
  const OpticalSetup setup = cfg.optics.setup();
  const PropagatorPlan plan(setup, cfg.optics.propagator());
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = cfg.solver.seed + 2 * static_cast<std::uint64_t>(t);
    const Volume u = random_volume(setup, seed);
    const ComplexField v = random_field(setup, seed + 1);
    const ComplexField au = forward(u, plan);
    Volume atv = adjoint(v, plan);
    if (corrupt) {
      // Test hook: apply the illumination phase instead of its conjugate.
      for (Index c = 0; c < atv.num_planes(); ++c) atv.plane(c) *= plan.illumination_phase(c) * plan.illumination_phase(c);
    }
    const double mismatch =
        std::abs(inner_product(au, v) - inner_product(u, atv)) / (frobenius_norm(au) * frobenius_norm(v));
    worst = std::max(worst, mismatch);
  }
  say(common, "adjoint test: " + std::to_string(trials) + " trials, max relative mismatch " + fmt(worst));
  return worst < 1e-12 ? kExitOk : kExitConsistency;
}

int cmd_spectral_norm(const CommonOptions& common) {
  const io::RunConfig cfg = load_config(common);
  const OpticalSetup setup = cfg.optics.setup();
  const PropagatorPlan plan(setup, cfg.optics.propagator());
  const double kappa = spectral_norm(plan, cfg.solver.power_iterations, cfg.solver.power_tolerance, cfg.solver.seed);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", kappa);
  std::cout << buf << '\n';
  return kExitOk;
}

int cmd_metrics(const CommonOptions& common, const std::string& estimate_path, const std::string& field_path,
                const std::string& truth_path) {
  const io::RunConfig cfg = load_config(common);
  const OpticalSetup setup = cfg.optics.setup();
  const io::VolumeFile estimate = io::read_volume(estimate_path);
  io::check_consistent(estimate.header, setup);
  if (field_path.empty() && truth_path.empty()) throw ConfigError("metrics needs --field and/or --truth");
  if (!field_path.empty()) {
    const io::FieldFile field = io::read_field(field_path);
    io::check_consistent(field.header, setup);
    const PropagatorPlan plan(setup, cfg.optics.propagator());
    std::cout << "data_error " << fmt(data_domain_error(field.field, estimate.volume, plan)) << '\n';
  }
  if (!truth_path.empty()) {
    const io::VolumeFile truth = io::read_volume(truth_path);
    io::check_consistent(truth.header, setup);
    std::cout << "object_error " << fmt(object_domain_error(truth.volume, estimate.volume)) << '\n';
    const SupportContrast sc = support_contrast(truth.volume, estimate.volume);
    std::cout << "median_on_support " << fmt(sc.median_on_support) << '\n'
              << "median_off_support " << fmt(sc.median_off_support) << '\n';
  }
  return kExitOk;
}

int cmd_export_slices(const CommonOptions& common, const std::string& input, const std::vector<int>& planes,
                      const std::string& channel) {
  require_out(common);
  const io::VolumeFile in = io::read_volume(input);
  std::vector<int> selected = planes;
  if (selected.empty())
    for (int p = 1; p <= in.volume.num_planes(); ++p) selected.push_back(p);
  const auto scalings = io::export_slices(in.volume, selected, io::parse_channel(channel), common.out);
  say(common, "wrote " + std::to_string(scalings.size()) + " slices");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holo3d: 3D object reconstruction from a single hologram-plane field"};
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "run configuration (JSON)");
    sub->add_option("--out", common.out, "output path");
    sub->add_option("--seed", common.seed, "override solver.seed");
    sub->add_flag("--quiet", common.quiet, "suppress informational output");
  };

  std::string input;
  std::string truth;
  std::string report;
  std::string field;
  std::string channel = "magnitude";
  std::vector<int> planes;
  int trials = 10;
  bool corrupt = false;

  auto* phantom = app.add_subcommand("phantom", "write a test object volume");
  add_common(phantom);
  auto* fwd = app.add_subcommand("forward", "volume -> detector field");
  add_common(fwd);
  fwd->add_option("--in", input, "input volume")->required();
  auto* bp = app.add_subcommand("backproject", "detector field -> volume (holographic replay)");
  add_common(bp);
  bp->add_option("--in", input, "input field")->required();
  auto* rec = app.add_subcommand("reconstruct", "regularized FISTA reconstruction");
  add_common(rec);
  rec->add_option("--in", input, "input field")->required();
  rec->add_option("--truth", truth, "ground-truth volume for error tracking");
  rec->add_option("--report", report, "report output path");
  auto* adj = app.add_subcommand("adjoint-test", "check <A U, V> = <U, A^H V> on random data");
  add_common(adj);
  adj->add_option("--trials", trials, "number of random trials");
  adj->add_flag("--corrupt-adjoint", corrupt, "test hook: break the adjoint")->group("");
  auto* sn = app.add_subcommand("spectral-norm", "power-iteration estimate of ||A^H A||");
  add_common(sn);
  auto* met = app.add_subcommand("metrics", "object/data-domain errors of an estimate");
  add_common(met);
  met->add_option("--in", input, "estimate volume")->required();
  met->add_option("--field", field, "detector field");
  met->add_option("--truth", truth, "ground-truth volume");
  auto* exp = app.add_subcommand("export-slices", "write planes as 16-bit PGM images");
  add_common(exp);
  exp->add_option("--in", input, "input volume")->required();
  exp->add_option("--planes", planes, "1-based plane numbers (default: all)")->delimiter(',');
  exp->add_option("--channel", channel, "magnitude|real|imag|phase");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUser;
  }

  try {
    if (*phantom) return cmd_phantom(common);
    if (*fwd) return cmd_forward(common, input);
    if (*bp) return cmd_backproject(common, input);
    if (*rec) return cmd_reconstruct(common, input, truth, report);
    if (*adj) return cmd_adjoint_test(common, trials, corrupt);
    if (*sn) return cmd_spectral_norm(common);
    if (*met) return cmd_metrics(common, input, field, truth);
    if (*exp) return cmd_export_slices(common, input, planes, channel);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\nrun 'holo3d <command> --help' for usage\n";
    return kExitUser;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const ConsistencyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConsistency;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConsistency;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUser;
}
