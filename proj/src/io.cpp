#include "nlkl/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nlkl/errors.hpp"

namespace nlkl {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kRegressionMagic[8] = {'N', 'L', 'K', 'L', 'R', 'E', 'G', '1'};

template <class T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw Error(ErrorCode::Config, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("field '") + name + "': " + e.what());
  }
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  return out;
}

void write_raw(std::ofstream& out, const void* data, std::size_t bytes) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
}

void read_raw(std::ifstream& in, void* data, std::size_t bytes, const fs::path& path) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
  if (!in) throw Error(ErrorCode::Io, "truncated file '" + path.string() + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json dataset_to_json(const Dataset& d) {
  const UniformGrid& g = d.grid();
  json j;
  j["x0"] = g.x0;
  j["dx"] = g.dx;
  j["count"] = g.count;
  json pairs = json::array();
  for (const DataPair& p : d.pairs()) {
    json q;
    q["u"] = std::vector<double>(p.u.values().begin(), p.u.values().end());
    q["f"] = std::vector<double>(p.f.values().begin(), p.f.values().end());
    if (!p.observed.empty()) {
      std::vector<int> mask(p.observed.begin(), p.observed.end());
      q["mask"] = mask;
    }
    pairs.push_back(std::move(q));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

Dataset dataset_from_json(const json& j) {
  UniformGrid grid;
  try {
    grid = UniformGrid::make(field<double>(j, "x0"), field<double>(j, "dx"), field<std::size_t>(j, "count"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    throw Error(ErrorCode::Config, std::string("dataset grid: ") + e.what());
  }
  const json& pairs = j.contains("pairs") ? j.at("pairs") : json();
  if (!pairs.is_array()) throw Error(ErrorCode::Config, "missing array 'pairs'");
  std::vector<DataPair> out;
  for (const json& q : pairs) {
    std::vector<std::uint8_t> mask;
    if (q.contains("mask")) {
      for (int m : field<std::vector<int>>(q, "mask")) mask.push_back(m != 0 ? 1 : 0);
    }
    try {
      out.emplace_back(SampledFunction(grid, field<std::vector<double>>(q, "u")),
                       SampledFunction(grid, field<std::vector<double>>(q, "f")), std::move(mask));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Config) throw;
      throw Error(ErrorCode::Config, std::string("dataset pair: ") + e.what());
    }
  }
  return Dataset(std::move(out));
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, "'" + path.string() + "': " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

void write_dataset(const Dataset& d, const fs::path& path) { write_text(path, dataset_to_json(d).dump()); }

Dataset read_dataset(const fs::path& path) { return dataset_from_json(read_json(path)); }

json kernel_spec_to_json(const TrueKernelSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  switch (s.kind) {
    case TrueKernelKind::Sine:
      j["frequency"] = s.frequency;
      j["cutoff"] = s.cutoff;
      break;
    case TrueKernelKind::Gaussian:
      j["center"] = s.center;
      j["sd"] = s.sd;
      break;
    case TrueKernelKind::FractionalLaplacian:
      j["exponent"] = s.exponent;
      j["dimension"] = s.dimension;
      j["inner"] = s.inner;
      j["outer"] = s.outer;
      break;
  }
  return j;
}

TrueKernelSpec kernel_spec_from_json(const json& j) {
  TrueKernelSpec s;
  if (j.is_string()) {
    s.kind = true_kernel_kind_from_string(j.get<std::string>());
    return s;
  }
  try {
    s.kind = true_kernel_kind_from_string(field<std::string>(j, "kind"));
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  s.frequency = j.value("frequency", s.frequency);
  s.cutoff = j.value("cutoff", s.cutoff);
  s.center = j.value("center", s.center);
  s.sd = j.value("sd", s.sd);
  s.exponent = j.value("exponent", s.exponent);
  s.dimension = j.value("dimension", s.dimension);
  s.inner = j.value("inner", s.inner);
  s.outer = j.value("outer", s.outer);
  return s;
}

json estimate_to_json(const KernelEstimate& e) {
  json j;
  j["knots"] = e.basis.knots().knots();
  j["degree"] = e.basis.degree();
  j["coefficients"] = std::vector<double>(e.coefficients.data(), e.coefficients.data() + e.coefficients.size());
  j["lambda"] = e.lambda;
  j["regularizer"] = to_string(e.regularizer);
  j["loss"] = e.loss;
  j["eigenvalues"] = e.eigenvalues;
  return j;
}

KernelEstimate estimate_from_json(const json& j) {
  KernelEstimate e;
  try {
    e.basis = BSplineBasis(KnotVector(field<std::vector<double>>(j, "knots")), field<int>(j, "degree"));
  } catch (const Error& err) {
    if (err.code() == ErrorCode::Config) throw;
    throw Error(ErrorCode::Config, std::string("estimate basis: ") + err.what());
  }
  const auto c = field<std::vector<double>>(j, "coefficients");
  if (c.size() != e.basis.dimension()) throw Error(ErrorCode::Config, "coefficient count differs from basis dimension");
  e.coefficients = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  e.lambda = j.value("lambda", 0.0);
  e.loss = j.value("loss", 0.0);
  e.regularizer = regularizer_from_string(j.value("regularizer", std::string("rkhs")));
  e.eigenvalues = j.value("eigenvalues", std::vector<double>{});
  return e;
}

void write_estimate(const KernelEstimate& e, const fs::path& path) {
  write_text(path, estimate_to_json(e).dump(2) + "\n");
}

KernelEstimate read_estimate(const fs::path& path) { return estimate_from_json(read_json(path)); }

void write_measure_csv(const ExplorationMeasure& rho, const fs::path& path) {
  std::string s = "r,weight\n";
  for (std::size_t k = 1; k <= rho.size(); ++k) {
    s += format_double(rho.r(k)) + "," + format_double(rho.weight(k)) + "\n";
  }
  write_text(path, s);
}

void write_lcurve_csv(const LCurve& curve, const fs::path& path) {
  std::string s = "lambda,logE,logR,curvature\n";
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
    s += format_double(curve.lambdas[i]) + "," + format_double(curve.points[i].x) + "," +
         format_double(curve.points[i].y) + "," + format_double(curve.curvature[i]) + "\n";
  }
  write_text(path, s);
}

void write_trajectory_csv(const Trajectory& traj, const fs::path& path) {
  std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
  out << "t";
  for (std::size_t j = 0; j < traj.grid.count; ++j) out << "," << format_double(traj.grid.node(j));
  out << "\n";
  for (std::size_t n = 0; n < traj.u.size(); ++n) {
    out << format_double(static_cast<double>(n) * traj.dt);
    for (double v : traj.u[n]) out << "," << format_double(v);
    out << "\n";
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

void write_regression_data(const RegressionData& reg, const fs::path& path) {
  std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
  const std::uint64_t K = reg.K();
  const std::uint64_t pairs = reg.pairs;
  write_raw(out, kRegressionMagic, sizeof kRegressionMagic);
  write_raw(out, &K, sizeof K);
  write_raw(out, &pairs, sizeof pairs);
  write_raw(out, &reg.dx, sizeof reg.dx);
  write_raw(out, &reg.Cf, sizeof reg.Cf);
  write_raw(out, &reg.rho.dr, sizeof reg.rho.dr);
  write_raw(out, &reg.rho.truncated_to, sizeof reg.rho.truncated_to);
  write_raw(out, &reg.rho.raw_mass, sizeof reg.rho.raw_mass);
  write_raw(out, reg.rho.weights.data(), K * sizeof(double));
  write_raw(out, reg.G.data(), K * K * sizeof(double));
  write_raw(out, reg.gf.data(), K * sizeof(double));
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

RegressionData read_regression_data(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  char magic[8];
  read_raw(in, magic, sizeof magic, path);
  if (std::memcmp(magic, kRegressionMagic, sizeof magic) != 0) {
    throw Error(ErrorCode::Io, "'" + path.string() + "' is not a regression-data bundle");
  }
  RegressionData reg;
  std::uint64_t K = 0;
  std::uint64_t pairs = 0;
  read_raw(in, &K, sizeof K, path);
  read_raw(in, &pairs, sizeof pairs, path);
  if (K > (1u << 20)) throw Error(ErrorCode::Io, "implausible bin count in '" + path.string() + "'");
  reg.pairs = pairs;
  read_raw(in, &reg.dx, sizeof reg.dx, path);
  read_raw(in, &reg.Cf, sizeof reg.Cf, path);
  read_raw(in, &reg.rho.dr, sizeof reg.rho.dr, path);
  read_raw(in, &reg.rho.truncated_to, sizeof reg.rho.truncated_to, path);
  read_raw(in, &reg.rho.raw_mass, sizeof reg.rho.raw_mass, path);
  reg.rho.weights.resize(K);
  read_raw(in, reg.rho.weights.data(), K * sizeof(double), path);
  const auto Ki = static_cast<Eigen::Index>(K);
  reg.G.resize(Ki, Ki);
  read_raw(in, reg.G.data(), K * K * sizeof(double), path);
  reg.gf.resize(Ki);
  read_raw(in, reg.gf.data(), K * sizeof(double), path);
  return reg;
}

}  // namespace nlkl
