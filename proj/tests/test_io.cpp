#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>

#include "nlkl/errors.hpp"
#include "nlkl/experiment.hpp"
#include "nlkl/explore.hpp"
#include "nlkl/io.hpp"
#include "support.hpp"

using namespace nlkl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nlkl_test_io";
  fs::create_directories(dir);
  return dir / name;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("format_double round trips") {
  std::mt19937_64 rng(191);
  for (int t = 0; t < 1000; ++t) {
    const double v = std::ldexp(testing_support::random_vector(rng, 1)[0], static_cast<int>(rng() % 200) - 100);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("dataset json round trip is exact") {
  std::mt19937_64 rng(193);
  const auto g = UniformGrid::make(-1.3, 0.07, 33);
  std::vector<std::uint8_t> mask(33, 1);
  mask[0] = 0;
  mask[17] = 0;
  const Dataset d({DataPair(testing_support::random_function(rng, g), testing_support::random_function(rng, g), mask),
                   DataPair(testing_support::random_function(rng, g), testing_support::random_function(rng, g))});
  const fs::path p = scratch("data.json");
  write_dataset(d, p);
  const Dataset e = read_dataset(p);
  REQUIRE(e.size() == 2);
  CHECK(e.grid().x0 == g.x0);
  CHECK(e.grid().dx == g.dx);
  CHECK(e.grid().count == g.count);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 33; ++j) {
      CHECK(e.pairs()[i].u[j] == d.pairs()[i].u[j]);
      CHECK(e.pairs()[i].f[j] == d.pairs()[i].f[j]);
      CHECK(e.pairs()[i].is_observed(j) == d.pairs()[i].is_observed(j));
    }
  }
  CHECK_FALSE(e.pairs()[0].is_observed(17));
}

TEST_CASE("malformed datasets are configuration errors") {
  nlohmann::json j = {{"x0", 0.0}, {"dx", 0.1}, {"count", 3}, {"pairs", {{{"u", {0, 1, 0}}, {"f", {0, 1, 0}}}}}};
  CHECK(dataset_from_json(j).size() == 1);

  auto missing = j;
  missing.erase("dx");
  CHECK(code_of([&] { dataset_from_json(missing); }) == ErrorCode::Config);
  auto short_u = j;
  short_u["pairs"][0]["u"] = {0, 1};
  CHECK(code_of([&] { dataset_from_json(short_u); }) == ErrorCode::Config);
  auto wrong_type = j;
  wrong_type["count"] = "three";
  CHECK(code_of([&] { dataset_from_json(wrong_type); }) == ErrorCode::Config);
  auto bad_grid = j;
  bad_grid["dx"] = -0.1;
  CHECK(code_of([&] { dataset_from_json(bad_grid); }) == ErrorCode::Config);
  auto no_pairs = j;
  no_pairs.erase("pairs");
  CHECK(code_of([&] { dataset_from_json(no_pairs); }) == ErrorCode::Config);

  const fs::path p = scratch("broken.json");
  write_text(p, "{\"x0\": 0, ");
  CHECK(code_of([&] { read_dataset(p); }) == ErrorCode::Config);
  CHECK(code_of([&] { read_dataset(scratch("does_not_exist.json")); }) == ErrorCode::Io);
}

TEST_CASE("estimate json round trip") {
  std::mt19937_64 rng(197);
  KernelEstimate est;
  est.basis = make_uniform_basis(3.7, 9, 2);
  const auto c = testing_support::random_vector(rng, 9);
  est.coefficients = Eigen::Map<const Eigen::VectorXd>(c.data(), 9);
  est.lambda = 1.25e-7;
  est.loss = 0.5;
  est.regularizer = RegularizerKind::L2rho;
  est.eigenvalues = {3.0, 2.0, 1e-9};
  const fs::path p = scratch("estimate.json");
  write_estimate(est, p);
  const KernelEstimate back = read_estimate(p);
  CHECK(back.basis.knots().knots() == est.basis.knots().knots());
  CHECK(back.basis.degree() == 2);
  CHECK(back.coefficients == est.coefficients);
  CHECK(back.lambda == est.lambda);
  CHECK(back.regularizer == RegularizerKind::L2rho);
  CHECK(back.eigenvalues == est.eigenvalues);
  for (double r : {0.0, 0.3, 1.7, 3.7}) CHECK(back(r) == est(r));

  auto j = estimate_to_json(est);
  j["coefficients"] = std::vector<double>{1.0};
  CHECK(code_of([&] { estimate_from_json(j); }) == ErrorCode::Config);
  j = estimate_to_json(est);
  j["knots"] = std::vector<double>{0.0, 2.0, 1.0};
  CHECK(code_of([&] { estimate_from_json(j); }) == ErrorCode::Config);
}

TEST_CASE("kernel spec json") {
  for (TrueKernelKind k : {TrueKernelKind::Sine, TrueKernelKind::Gaussian, TrueKernelKind::FractionalLaplacian}) {
    TrueKernelSpec s;
    s.kind = k;
    s.sd = 0.7;
    s.frequency = 3.0;
    s.exponent = 0.25;
    const TrueKernelSpec back = kernel_spec_from_json(kernel_spec_to_json(s));
    CHECK(back.kind == k);
    const RadialKernel a = make_true_kernel(s), b = make_true_kernel(back);
    for (double r : {0.05, 0.5, 2.0, 5.0}) CHECK(a(r) == b(r));
  }
  CHECK(kernel_spec_from_json(nlohmann::json("gaussian")).kind == TrueKernelKind::Gaussian);
  CHECK(code_of([] { kernel_spec_from_json(nlohmann::json{{"kind", "cubic"}}); }) == ErrorCode::Config);
}

TEST_CASE("regression data binary round trip") {
  std::mt19937_64 rng(199);
  const Dataset d = testing_support::random_dataset(rng, 60, 2, 0.1);
  const RegressionData reg = extract_regression_data(d, 1.5, exploration_measure(d));
  const fs::path p = scratch("reg.bin");
  write_regression_data(reg, p);
  const RegressionData back = read_regression_data(p);
  CHECK(back.K() == reg.K());
  CHECK(back.G == reg.G);
  CHECK(back.gf == reg.gf);
  CHECK(back.rho.weights == reg.rho.weights);
  CHECK(back.rho.raw_mass == reg.rho.raw_mass);
  CHECK(back.rho.truncated_to == reg.rho.truncated_to);
  CHECK(back.Cf == reg.Cf);
  CHECK(back.dx == reg.dx);
  CHECK(back.pairs == 2);

  const std::string bytes = slurp(p);
  write_text(scratch("truncated.bin"), bytes.substr(0, bytes.size() - 9));
  CHECK(code_of([&] { read_regression_data(scratch("truncated.bin")); }) == ErrorCode::Io);
  write_text(scratch("foreign.bin"), "PNG....." + bytes.substr(8));
  CHECK(code_of([&] { read_regression_data(scratch("foreign.bin")); }) == ErrorCode::Io);
}

TEST_CASE("csv tables") {
  ExplorationMeasure rho;
  rho.dr = 0.5;
  rho.weights = {0.25, 0.75};
  write_measure_csv(rho, scratch("rho.csv"));
  CHECK(slurp(scratch("rho.csv")) == "r,weight\n0.5,0.25\n1,0.75\n");

  LCurve c;
  c.lambdas = {1.0, 2.0};
  c.points = {{0.0, 1.0}, {-1.0, 0.5}};
  c.curvature = {0.0, 0.0};
  write_lcurve_csv(c, scratch("lcurve.csv"));
  CHECK(slurp(scratch("lcurve.csv")) == "lambda,logE,logR,curvature\n1,0,1,0\n2,-1,0.5,0\n");

  Trajectory traj;
  traj.grid = UniformGrid::make(0.0, 0.5, 2);
  traj.dt = 0.25;
  traj.u = {{0.0, 0.0}, {1.0, -1.0}};
  write_trajectory_csv(traj, scratch("traj.csv"));
  CHECK(slurp(scratch("traj.csv")) == "t,0,0.5\n0,0,0\n0.25,1,-1\n");
}

TEST_CASE("experiment configuration") {
  const ExperimentConfig def = experiment_config_from_json(nlohmann::json::object());
  CHECK(def.dx_ladder == std::vector<double>{0.2, 0.1, 0.05});
  CHECK(def.regularizers.size() == 3);

  const nlohmann::json j = {{"kernel", {{"kind", "gaussian"}, {"sd", 0.5}}},
                            {"dx_ladder", {0.1, 0.05}},
                            {"regularizers", {"rkhs", "L2"}},
                            {"replicates", 4},
                            {"seed", 77}};
  const ExperimentConfig cfg = experiment_config_from_json(j);
  CHECK(cfg.kernel.kind == TrueKernelKind::Gaussian);
  CHECK(cfg.kernel.sd == 0.5);
  CHECK(cfg.replicates == 4);
  CHECK(cfg.regularizers == std::vector<RegularizerKind>{RegularizerKind::RKHS, RegularizerKind::L2rho});
  const ExperimentConfig again = experiment_config_from_json(experiment_config_to_json(cfg));
  CHECK(again.dx_ladder == cfg.dx_ladder);
  CHECK(again.seed == 77);

  CHECK(code_of([] { experiment_config_from_json({{"dx_ladder", {0.1}}, {"colour", 1}}); }) == ErrorCode::Config);
  CHECK(code_of([] { experiment_config_from_json({{"dx_ladder", {-0.1}}}); }) == ErrorCode::Config);
  CHECK(code_of([] { experiment_config_from_json({{"regularizers", {"h2"}}}); }) == ErrorCode::Config);
  CHECK(code_of([] { experiment_config_from_json({{"degree", "two"}}); }) == ErrorCode::Config);
  CHECK(code_of([] { experiment_config_from_json({{"kernel", "cubic"}}); }) == ErrorCode::Config);
  CHECK(code_of([] { experiment_config_from_json(nlohmann::json::array()); }) == ErrorCode::Config);
}
