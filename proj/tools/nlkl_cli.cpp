// nlkl: command-line driver for kernel learning, synthetic sweeps and the
// nonlocal wave workflow.
//
// Exit codes: 0 success, 2 configuration or I/O error, 3 degenerate data,
// 4 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nlkl/errors.hpp"
#include "nlkl/experiment.hpp"
#include "nlkl/io.hpp"
#include "nlkl/pipeline.hpp"
#include "nlkl/plot.hpp"
#include "nlkl/synthetic.hpp"
#include "nlkl/wave.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nlkl;

namespace {

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  json j = read_json(path);
  if (!j.is_object()) throw Error(ErrorCode::Config, "'" + path + "' must hold a JSON object");
  return j;
}

template <class T>
T cfg(const json& j, const char* name, T fallback) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config field '") + name + "': " + e.what());
  }
}

AlgorithmOptions algorithm_options(const json& j) {
  AlgorithmOptions o;
  o.degree = cfg(j, "degree", o.degree);
  o.kind = regularizer_from_string(cfg(j, "regularizer", to_string(o.kind)));
  o.ladder_size = cfg(j, "ladder_size", o.ladder_size);
  o.lcurve_points = cfg(j, "lcurve_points", o.lcurve_points);
  o.support_threshold = cfg(j, "threshold", o.support_threshold);
  o.rule = boundary_rule_from_string(cfg(j, "rule", std::string(to_string(o.rule))));
  if (j.contains("support")) o.support_override = cfg(j, "support", 0.0);
  if (j.contains("rho_cap")) o.rho_cap = cfg(j, "rho_cap", 0.0);
  if (j.contains("lambda")) o.fixed_lambda = cfg(j, "lambda", 0.0);
  o.dimensions = cfg(j, "dimensions", o.dimensions);
  if (o.degree < 0 || o.degree > 3) throw Error(ErrorCode::Config, "degree must be 0..3");
  if (o.lcurve_points < 5) throw Error(ErrorCode::Config, "lcurve_points must be >= 5");
  return o;
}

RadialKernel kernel_from_config(const json& j) {
  if (j.is_object() && j.value("kind", std::string()) == "bump") {
    return bump_kernel(j.value("amplitude", 4.0), j.value("center", 0.75), j.value("width", 0.2),
                       j.value("cutoff", 1.5));
  }
  try {
    return make_true_kernel(kernel_spec_from_json(j));
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what());
  }
}

void write_learn_outputs(const Algorithm1Result& res, const fs::path& out) {
  write_estimate(res.estimate, out / "estimate.json");
  write_measure_csv(res.rho, out / "measure.csv");
  const SpaceCandidate& chosen = res.candidates[res.chosen];
  if (!chosen.curve.lambdas.empty()) {
    write_lcurve_csv(chosen.curve, out / "lcurve.csv");
    write_text(out / "lcurve.svg", lcurve_svg(chosen.curve, res.estimate.lambda));
  }
  json report;
  report["R"] = res.support.R;
  report["R_rho"] = res.support.R_rho;
  report["chosen_dimension"] = res.estimate.basis.dimension();
  json cands = json::array();
  for (const SpaceCandidate& c : res.candidates) {
    json jc{{"dimension", c.dimension}, {"singular", c.singular}};
    if (c.singular) {
      jc["note"] = c.note;
    } else {
      jc["lambda"] = c.lambda;
      jc["loss"] = c.loss;
      jc["fsoi_rank"] = c.fsoi_rank;
      jc["degenerate_curve"] = c.degenerate_curve;
    }
    cands.push_back(std::move(jc));
  }
  report["candidates"] = std::move(cands);
  write_text(out / "report.json", report.dump(2) + "\n");
}

int cmd_generate(const std::string& config, std::optional<std::string> kernel, std::optional<double> dx,
                 std::optional<double> nsr, std::optional<std::uint64_t> seed, const std::string& out) {
  const json j = load_config(config);
  SyntheticSpec spec;
  if (j.contains("kernel")) spec.kernel = kernel_spec_from_json(j.at("kernel"));
  if (kernel) spec.kernel = kernel_spec_from_json(json(*kernel));
  spec.dx = dx.value_or(cfg(j, "dx", spec.dx));
  spec.half_width = cfg(j, "half_width", spec.half_width);
  const std::string family = cfg(j, "family", std::string("sincos"));
  if (family != "sincos" && family != "harmonics") throw Error(ErrorCode::Config, "family must be sincos or harmonics");
  spec.family = family == "sincos" ? InputFamily::SinCos : InputFamily::Harmonics;
  spec.pairs = cfg(j, "pairs", spec.pairs);
  spec.tol = cfg(j, "tol", spec.tol);
  const NoiseSpec noise{nsr.value_or(cfg(j, "nsr", 0.0)), seed.value_or(cfg<std::uint64_t>(j, "seed", 1))};
  if (!(noise.nsr >= 0.0)) throw Error(ErrorCode::Config, "nsr must be >= 0");
  if (!(spec.dx > 0.0)) throw Error(ErrorCode::Config, "dx must be > 0");
  const Dataset d = add_noise(make_synthetic_dataset(spec), noise);
  write_dataset(d, out);
  std::printf("wrote %zu pairs on %zu nodes to %s\n", d.size(), d.grid().count, out.c_str());
  return 0;
}

int cmd_learn(const std::string& data, const std::string& config, std::optional<std::string> reg,
              std::optional<int> degree, const std::string& truth, const std::string& out) {
  json j = load_config(config);
  if (reg) j["regularizer"] = *reg;
  if (degree) j["degree"] = *degree;
  const AlgorithmOptions opts = algorithm_options(j);
  const Dataset d = read_dataset(data);
  const Algorithm1Result res = run_algorithm1(d, opts);
  write_learn_outputs(res, out);
  std::printf("R = %.6g, n* = %zu, lambda = %.6g, loss = %.6g\n", res.support.R,
              res.estimate.basis.dimension(), res.estimate.lambda, res.estimate.loss);
  const std::vector<double> r = bin_radii(res.rho);
  std::vector<double> truth_bins;
  if (!truth.empty()) {
    const RadialKernel phi = make_true_kernel(kernel_spec_from_json(json(truth)));
    for (double x : r) truth_bins.push_back(phi(x));
    std::printf("relative L2(rho) error = %.6g\n", relative_l2rho_error(res.estimate, phi, res.rho));
  }
  write_text(fs::path(out) / "estimate.svg", estimate_overlay_svg(r, res.estimate.tabulate(res.rho.dr, r.size()), truth_bins));
  return 0;
}

int cmd_sweep(const std::string& config, std::optional<std::uint64_t> seed, std::optional<int> degree,
              std::optional<std::string> reg, std::optional<std::size_t> replicates, const std::string& out) {
  json j = load_config(config);
  if (seed) j["seed"] = *seed;
  if (degree) j["degree"] = *degree;
  if (reg) j["regularizers"] = std::vector<std::string>{*reg};
  if (replicates) j["replicates"] = *replicates;
  if (!out.empty()) j["output_dir"] = out;
  const ExperimentConfig c = experiment_config_from_json(j);
  const RunReport report = run_convergence_sweep(c);
  std::size_t failed = 0;
  for (const CellRecord& r : report.records) failed += r.status != "ok";
  std::printf("%zu records (%zu failed) written to %s\n", report.records.size(), failed,
              c.output_dir.string().c_str());
  for (const RateRecord& r : report.rates) {
    std::printf("%s nsr=%g N=%zu %s: slope %.4g (replicates %.4g +- %.4g)\n", r.kernel.c_str(), r.nsr, r.pairs,
                r.regularizer.c_str(), r.slope_of_mean, r.mean_slope, r.std_slope);
  }
  return 0;
}

std::vector<LoadingSpec> loadings_from_config(const json& j) {
  const double b = cfg(j, "b", 25.0);
  const double T = cfg(j, "T", 2.0);
  const double period = cfg(j, "period", 0.2);
  std::vector<LoadingSpec> out;
  const json types = j.contains("loadings") ? j.at("loadings") : json::array({"1", "2", "3"});
  for (const json& t : types) {
    std::string name;
    std::vector<double> js;
    if (t.is_object()) {
      name = t.at("type").is_string() ? t.at("type").get<std::string>() : std::to_string(t.at("type").get<int>());
      js = t.value("j", std::vector<double>{});
    } else {
      name = t.is_string() ? t.get<std::string>() : std::to_string(t.get<int>());
    }
    const LoadingKind kind = loading_kind_from_string(name);
    if (js.empty()) js = loading_indices(kind);
    for (double jj : js) {
      LoadingSpec s = make_loading(kind, jj);
      s.b = b;
      s.T = T;
      s.period = period;
      out.push_back(s);
    }
  }
  return out;
}

int cmd_wave_sim(const std::string& config, const std::string& out) {
  const json j = load_config(config);
  const RadialKernel phi = kernel_from_config(j.contains("kernel") ? j.at("kernel") : json{{"kind", "bump"}});
  const double dx = cfg(j, "dx", 0.05);
  const double dt = cfg(j, "dt", 0.02);
  const std::vector<LoadingSpec> loadings = loadings_from_config(j);
  if (loadings.empty()) throw Error(ErrorCode::Config, "no loadings configured");
  const Dataset d = simulate_training_set(phi, loadings, dx, dt);
  write_dataset(d, fs::path(out) / "dataset.json");
  write_trajectory_csv(simulate(phi, loadings.front(), dx, dt), fs::path(out) / "trajectory.csv");
  const std::vector<double> bins = phi.tabulate(dx);
  const DispersionCurve disp = dispersion_curve(bins, dx);
  write_text(fs::path(out) / "dispersion_true.svg", dispersion_svg(disp));
  std::printf("simulated %zu loadings, %zu training pairs on %zu nodes\n", loadings.size(), d.size(),
              d.grid().count);
  return 0;
}

int cmd_wave_learn(const std::string& data, const std::string& config, std::optional<std::string> reg,
                   std::optional<int> degree, const std::string& out) {
  json j = load_config(config);
  if (reg) j["regularizer"] = *reg;
  if (degree) j["degree"] = *degree;
  json learn = j.contains("learn") ? j.at("learn") : json::object();
  if (reg) learn["regularizer"] = *reg;
  if (degree) learn["degree"] = *degree;
  const AlgorithmOptions opts = algorithm_options(learn);
  const Dataset d = read_dataset(data);
  const Algorithm1Result res = run_algorithm1(d, opts);
  write_learn_outputs(res, out);

  const double dx = d.grid().dx;
  const std::vector<double> bins = res.estimate.tabulate(dx, res.rho.size());
  const DispersionCurve disp = dispersion_curve(bins, dx);
  std::string csv = "k,omega2,group_velocity\n";
  for (std::size_t i = 0; i < disp.k.size(); ++i) {
    csv += format_double(disp.k[i]) + "," + format_double(disp.omega2[i]) + "," + format_double(disp.group_velocity[i]) + "\n";
  }
  write_text(fs::path(out) / "dispersion.csv", csv);
  write_text(fs::path(out) / "dispersion.svg", dispersion_svg(disp));
  std::printf("R = %.6g, n* = %zu, lambda = %.6g, min omega^2 = %.6g, stable = %s\n", res.support.R,
              res.estimate.basis.dimension(), res.estimate.lambda, disp.min_omega2, disp.stable ? "yes" : "no");
  if (j.contains("kernel")) {
    const RadialKernel phi = kernel_from_config(j.at("kernel"));
    std::printf("relative L2(rho) error = %.6g\n", relative_l2rho_error(res.estimate, phi, res.rho));
  }
  return 0;
}

int cmd_plot(const std::string& records, const std::string& out) {
  std::ifstream in(records, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + records + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  RunReport report;
  report.records = parse_records_csv(text);
  report.rates = fit_rates(report.records);
  const auto files = emit_plots(report, out);
  if (files.empty()) {
    std::fprintf(stderr, "warning: report has no records; no figures written\n");
  }
  for (const auto& f : files) std::printf("%s\n", f.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn radial kernels of nonlocal operators from function-pair data"};
  app.require_subcommand(1);

  std::string config, data, out, truth, records;
  std::optional<std::string> kernel, reg;
  std::optional<double> dx, nsr;
  std::optional<std::uint64_t> seed;
  std::optional<int> degree;
  std::optional<std::size_t> replicates;

  auto* gen = app.add_subcommand("generate", "synthetic dataset by adaptive quadrature");
  gen->add_option("--config", config, "JSON config")->check(CLI::ExistingFile);
  gen->add_option("--kernel", kernel, "sine, gaussian or fractional");
  gen->add_option("--dx", dx, "mesh size");
  gen->add_option("--nsr", nsr, "noise-to-signal ratio");
  gen->add_option("--seed", seed, "noise seed");
  gen->add_option("--out", out, "output dataset JSON")->required();

  auto* learn = app.add_subcommand("learn", "estimate a kernel from a dataset");
  learn->add_option("--data", data, "dataset JSON")->required()->check(CLI::ExistingFile);
  learn->add_option("--config", config, "options JSON")->check(CLI::ExistingFile);
  learn->add_option("--regularizer", reg, "l2, L2 or rkhs")->check(CLI::IsMember({"l2", "L2", "rkhs"}));
  learn->add_option("--degree", degree, "B-spline degree");
  learn->add_option("--truth", truth, "true kernel for error reporting");
  learn->add_option("--out", out, "output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "convergence sweep over dx, nsr and replicates");
  sweep->add_option("--config", config, "experiment JSON")->check(CLI::ExistingFile);
  sweep->add_option("--seed", seed, "base seed");
  sweep->add_option("--degree", degree, "B-spline degree");
  sweep->add_option("--regularizer", reg, "run only this regularizer")->check(CLI::IsMember({"l2", "L2", "rkhs"}));
  sweep->add_option("--replicates", replicates, "replicates per cell");
  sweep->add_option("--out", out, "output directory");

  auto* wsim = app.add_subcommand("wave-sim", "simulate nonlocal wave loadings into training pairs");
  wsim->add_option("--config", config, "wave JSON")->check(CLI::ExistingFile);
  wsim->add_option("--out", out, "output directory")->required();

  auto* wlearn = app.add_subcommand("wave-learn", "learn a kernel from wave training pairs");
  wlearn->add_option("--data", data, "dataset JSON")->required()->check(CLI::ExistingFile);
  wlearn->add_option("--config", config, "options JSON")->check(CLI::ExistingFile);
  wlearn->add_option("--regularizer", reg, "l2, L2 or rkhs")->check(CLI::IsMember({"l2", "L2", "rkhs"}));
  wlearn->add_option("--degree", degree, "B-spline degree");
  wlearn->add_option("--out", out, "output directory")->required();

  auto* plot = app.add_subcommand("plot", "SVG and CSV figures from sweep records");
  plot->add_option("--records", records, "records.csv from a sweep")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_generate(config, kernel, dx, nsr, seed, out);
    if (*learn) return cmd_learn(data, config, reg, degree, truth, out);
    if (*sweep) return cmd_sweep(config, seed, degree, reg, replicates, out);
    if (*wsim) return cmd_wave_sim(config, out);
    if (*wlearn) return cmd_wave_learn(data, config, reg, degree, out);
    if (*plot) return cmd_plot(records, out);
  } catch (const Error& e) {
    std::fprintf(stderr, "nlkl: %s\n", e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "nlkl: %s\n", e.what());
    return 4;
  }
  return 0;
}
