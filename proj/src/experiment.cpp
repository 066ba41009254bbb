#include "nlkl/experiment.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "nlkl/errors.hpp"
#include "nlkl/io.hpp"
#include "nlkl/parallel.hpp"

namespace nlkl {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string input_family_name(InputFamily f) { return f == InputFamily::SinCos ? "sincos" : "harmonics"; }

InputFamily input_family_from_string(const std::string& s) {
  if (s == "sincos") return InputFamily::SinCos;
  if (s == "harmonics") return InputFamily::Harmonics;
  throw Error(ErrorCode::Config, "unknown input family '" + s + "' (expected sincos or harmonics)");
}

template <class T>
T get_or(const json& j, const char* name, T fallback) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config field '") + name + "': " + e.what());
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct CellKey {
  double dx;
  double nsr;
  std::size_t pairs;
  std::size_t replicate;
};

std::string cell_identity(const ExperimentConfig& cfg, const CellKey& c) {
  json j;
  j["kernel"] = kernel_spec_to_json(cfg.kernel);
  j["dx"] = c.dx;
  j["nsr"] = c.nsr;
  j["pairs"] = c.pairs;
  j["replicate"] = c.replicate;
  j["seed"] = cfg.seed;
  j["degree"] = cfg.degree;
  j["half_width"] = cfg.half_width;
  j["family"] = input_family_name(cfg.family);
  j["ladder_size"] = cfg.ladder_size;
  j["lcurve_points"] = cfg.lcurve_points;
  j["quadrature_tol"] = cfg.quadrature_tol;
  j["noiseless_support"] = cfg.noiseless_support;
  std::vector<std::string> regs;
  for (RegularizerKind k : cfg.regularizers) regs.push_back(to_string(k));
  j["regularizers"] = regs;
  return j.dump();
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double from_nullable(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

json record_to_json(const CellRecord& r) {
  return json{{"kernel", r.kernel}, {"dx", r.dx}, {"nsr", r.nsr}, {"pairs", r.pairs},
              {"regularizer", r.regularizer}, {"replicate", r.replicate}, {"n_star", r.n_star},
              {"lambda", nullable(r.lambda)}, {"loss", nullable(r.loss)}, {"error", nullable(r.error)},
              {"R", nullable(r.R)}, {"status", r.status}};
}

CellRecord record_from_json(const json& j) {
  CellRecord r;
  r.kernel = j.at("kernel").get<std::string>();
  r.dx = j.at("dx").get<double>();
  r.nsr = j.at("nsr").get<double>();
  r.pairs = j.at("pairs").get<std::size_t>();
  r.regularizer = j.at("regularizer").get<std::string>();
  r.replicate = j.at("replicate").get<std::size_t>();
  r.n_star = j.at("n_star").get<std::size_t>();
  r.lambda = from_nullable(j.at("lambda"));
  r.loss = from_nullable(j.at("loss"));
  r.error = from_nullable(j.at("error"));
  r.R = from_nullable(j.at("R"));
  r.status = j.at("status").get<std::string>();
  return r;
}

// Cached results of one cell, or empty when absent or stale.
std::vector<CellRecord> load_cell(const fs::path& file, const std::string& identity) {
  std::ifstream in(file);
  if (!in) return {};
  try {
    const json j = json::parse(in);
    if (j.at("identity").get<std::string>() != identity) return {};
    std::vector<CellRecord> out;
    for (const json& r : j.at("records")) out.push_back(record_from_json(r));
    return out;
  } catch (const std::exception&) {
    return {};
  }
}

void store_cell(const fs::path& file, const std::string& identity, const std::vector<CellRecord>& recs) {
  json j;
  j["identity"] = identity;
  j["records"] = json::array();
  for (const CellRecord& r : recs) j["records"].push_back(record_to_json(r));
  // Write then rename so an interrupted run never leaves a half cell behind.
  const fs::path tmp = file.string() + ".tmp";
  write_text(tmp, j.dump());
  fs::rename(tmp, file);
}

std::string csv_double(double v) { return std::isfinite(v) ? format_double(v) : "nan"; }

double parse_double(const std::string& s) {
  if (s == "nan") return kNaN;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, "bad number '" + s + "' in records CSV");
  }
}

std::size_t parse_size(const std::string& s) {
  try {
    return static_cast<std::size_t>(std::stoull(s));
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, "bad integer '" + s + "' in records CSV");
  }
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.dx_ladder.empty()) throw Error(ErrorCode::Config, "dx_ladder is empty");
  for (double dx : cfg.dx_ladder) {
    if (!(dx > 0.0)) throw Error(ErrorCode::Config, "dx_ladder entries must be positive");
  }
  if (cfg.nsr_ladder.empty()) throw Error(ErrorCode::Config, "nsr_ladder is empty");
  for (double s : cfg.nsr_ladder) {
    if (!(s >= 0.0)) throw Error(ErrorCode::Config, "nsr_ladder entries must be >= 0");
  }
  if (cfg.replicates < 1) throw Error(ErrorCode::Config, "replicates must be >= 1");
  if (cfg.degree < 0 || cfg.degree > 3) throw Error(ErrorCode::Config, "degree must be 0..3");
  if (cfg.regularizers.empty()) throw Error(ErrorCode::Config, "no regularizers configured");
  if (!(cfg.half_width > 0.0)) throw Error(ErrorCode::Config, "half_width must be > 0");
  if (cfg.pairs_ladder.empty()) throw Error(ErrorCode::Config, "pairs_ladder is empty");
  for (std::size_t n : cfg.pairs_ladder) {
    if (n == 0) throw Error(ErrorCode::Config, "pairs_ladder entries must be >= 1");
    if (cfg.family == InputFamily::SinCos && n != 2) {
      throw Error(ErrorCode::Config, "the sincos family always has 2 pairs");
    }
  }
  if (cfg.ladder_size < 1) throw Error(ErrorCode::Config, "ladder_size must be >= 1");
  if (cfg.lcurve_points < 5) throw Error(ErrorCode::Config, "lcurve_points must be >= 5");
  if (!(cfg.quadrature_tol > 0.0)) throw Error(ErrorCode::Config, "quadrature_tol must be > 0");
  try {
    (void)make_true_kernel(cfg.kernel);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what());
  }
}

ExperimentConfig experiment_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Config, "experiment config must be a JSON object");
  static const char* known[] = {"kernel", "dx_ladder", "nsr_ladder", "replicates", "degree",
                                "regularizers", "seed", "output_dir", "half_width", "family",
                                "pairs_ladder", "ladder_size", "lcurve_points", "quadrature_tol",
                                "noiseless_support", "resume"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw Error(ErrorCode::Config, "unknown config field '" + item.key() + "'");
  }
  ExperimentConfig cfg;
  if (j.contains("kernel")) {
    try {
      cfg.kernel = kernel_spec_from_json(j.at("kernel"));
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, e.what());
    }
  }
  cfg.dx_ladder = get_or(j, "dx_ladder", cfg.dx_ladder);
  cfg.nsr_ladder = get_or(j, "nsr_ladder", cfg.nsr_ladder);
  cfg.replicates = get_or(j, "replicates", cfg.replicates);
  cfg.degree = get_or(j, "degree", cfg.degree);
  if (j.contains("regularizers")) {
    cfg.regularizers.clear();
    for (const auto& name : get_or(j, "regularizers", std::vector<std::string>{})) {
      cfg.regularizers.push_back(regularizer_from_string(name));
    }
  }
  cfg.seed = get_or(j, "seed", cfg.seed);
  cfg.output_dir = get_or(j, "output_dir", cfg.output_dir.string());
  cfg.half_width = get_or(j, "half_width", cfg.half_width);
  cfg.family = input_family_from_string(get_or(j, "family", input_family_name(cfg.family)));
  cfg.pairs_ladder = get_or(j, "pairs_ladder", cfg.pairs_ladder);
  cfg.ladder_size = get_or(j, "ladder_size", cfg.ladder_size);
  cfg.lcurve_points = get_or(j, "lcurve_points", cfg.lcurve_points);
  cfg.quadrature_tol = get_or(j, "quadrature_tol", cfg.quadrature_tol);
  cfg.noiseless_support = get_or(j, "noiseless_support", cfg.noiseless_support);
  cfg.resume = get_or(j, "resume", cfg.resume);
  validate(cfg);
  return cfg;
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["kernel"] = kernel_spec_to_json(cfg.kernel);
  j["dx_ladder"] = cfg.dx_ladder;
  j["nsr_ladder"] = cfg.nsr_ladder;
  j["replicates"] = cfg.replicates;
  j["degree"] = cfg.degree;
  std::vector<std::string> regs;
  for (RegularizerKind k : cfg.regularizers) regs.push_back(to_string(k));
  j["regularizers"] = regs;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir.string();
  j["half_width"] = cfg.half_width;
  j["family"] = input_family_name(cfg.family);
  j["pairs_ladder"] = cfg.pairs_ladder;
  j["ladder_size"] = cfg.ladder_size;
  j["lcurve_points"] = cfg.lcurve_points;
  j["quadrature_tol"] = cfg.quadrature_tol;
  j["noiseless_support"] = cfg.noiseless_support;
  j["resume"] = cfg.resume;
  return j;
}

std::uint64_t cell_seed(std::uint64_t seed, double dx, double nsr, std::size_t pairs,
                        std::size_t replicate) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(dx));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(nsr));
  h = splitmix64(h ^ static_cast<std::uint64_t>(pairs));
  return splitmix64(h ^ static_cast<std::uint64_t>(replicate));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return kNaN;
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return kNaN;
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : kNaN;
}

std::vector<RateRecord> fit_rates(const std::vector<CellRecord>& records) {
  using GroupKey = std::tuple<std::string, double, std::size_t, std::string>;
  // Insertion order of groups follows the records.
  std::vector<GroupKey> order;
  std::map<GroupKey, std::vector<const CellRecord*>> groups;
  for (const CellRecord& r : records) {
    GroupKey key{r.kernel, r.nsr, r.pairs, r.regularizer};
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.push_back(&r);
  }

  std::vector<RateRecord> out;
  for (const GroupKey& key : order) {
    const auto& recs = groups[key];
    std::vector<double> dxs;
    std::map<double, std::pair<double, std::size_t>> mean_at;
    std::map<std::size_t, std::map<double, double>> per_rep;
    for (const CellRecord* r : recs) {
      if (r->status != "ok" || !std::isfinite(r->error)) continue;
      auto& m = mean_at[r->dx];
      m.first += r->error;
      m.second += 1;
      per_rep[r->replicate][r->dx] = r->error;
    }
    RateRecord rate;
    std::tie(rate.kernel, rate.nsr, rate.pairs, rate.regularizer) = key;
    std::vector<double> x, y;
    for (const auto& [dx, acc] : mean_at) {
      x.push_back(dx);
      y.push_back(acc.first / static_cast<double>(acc.second));
    }
    rate.slope_of_mean = loglog_slope(x, y);
    std::vector<double> slopes;
    for (const auto& [rep, errs] : per_rep) {
      std::vector<double> xr, yr;
      for (const auto& [dx, e] : errs) {
        xr.push_back(dx);
        yr.push_back(e);
      }
      const double s = loglog_slope(xr, yr);
      if (std::isfinite(s)) slopes.push_back(s);
    }
    rate.replicates = slopes.size();
    if (slopes.empty()) {
      rate.mean_slope = kNaN;
      rate.std_slope = kNaN;
    } else {
      double m = 0.0;
      for (double s : slopes) m += s;
      m /= static_cast<double>(slopes.size());
      double v = 0.0;
      for (double s : slopes) v += (s - m) * (s - m);
      rate.mean_slope = m;
      rate.std_slope = slopes.size() > 1 ? std::sqrt(v / static_cast<double>(slopes.size() - 1)) : 0.0;
    }
    out.push_back(rate);
  }
  return out;
}

RunReport run_convergence_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  const fs::path cell_dir = cfg.output_dir / "cells";
  std::error_code ec;
  fs::create_directories(cell_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + cell_dir.string() + "': " + ec.message());

  const RadialKernel truth = make_true_kernel(cfg.kernel);
  const std::string kernel_name = to_string(cfg.kernel.kind);

  std::vector<CellKey> cells;
  for (double dx : cfg.dx_ladder) {
    for (std::size_t pairs : cfg.pairs_ladder) {
      for (double nsr : cfg.nsr_ladder) {
        for (std::size_t rep = 0; rep < cfg.replicates; ++rep) cells.push_back({dx, nsr, pairs, rep});
      }
    }
  }

  std::vector<std::vector<CellRecord>> results(cells.size());
  std::vector<std::string> identities(cells.size());
  std::vector<fs::path> files(cells.size());
  std::vector<std::size_t> todo;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    identities[c] = cell_identity(cfg, cells[c]);
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(identities[c])));
    files[c] = cell_dir / name;
    if (cfg.resume) results[c] = load_cell(files[c], identities[c]);
    if (results[c].empty()) todo.push_back(c);
  }

  // Noiseless data and its support estimate, once per (dx, pairs).
  struct Clean {
    Dataset data;
    double R = kNaN;
    std::string status = "ok";
  };
  std::map<std::pair<double, std::size_t>, Clean> clean;
  for (std::size_t c : todo) clean.try_emplace({cells[c].dx, cells[c].pairs});
  std::vector<std::pair<double, std::size_t>> clean_keys;
  for (auto& [key, value] : clean) clean_keys.push_back(key);
  for (const auto& key : clean_keys) {
    Clean& cd = clean[key];
    SyntheticSpec spec;
    spec.kernel = cfg.kernel;
    spec.half_width = cfg.half_width;
    spec.dx = key.first;
    spec.family = cfg.family;
    spec.pairs = key.second;
    spec.tol = cfg.quadrature_tol;
    cd.data = make_synthetic_dataset(spec);
    if (cfg.noiseless_support) {
      try {
        const ExplorationMeasure rho = exploration_measure(cd.data);
        cd.R = estimate_support(cd.data, rho).R;
      } catch (const Error& e) {
        cd.status = to_string(e.code());
      }
    }
  }

  parallel_for(todo.size(), [&](std::size_t t) {
    const std::size_t c = todo[t];
    const CellKey& key = cells[c];
    const Clean& cd = clean.at({key.dx, key.pairs});
    std::vector<CellRecord> recs;
    auto base = [&](RegularizerKind kind) {
      CellRecord r;
      r.kernel = kernel_name;
      r.dx = key.dx;
      r.nsr = key.nsr;
      r.pairs = key.pairs;
      r.regularizer = to_string(kind);
      r.replicate = key.replicate;
      r.lambda = kNaN;
      r.loss = kNaN;
      r.error = kNaN;
      r.R = cd.R;
      return r;
    };
    try {
      if (cd.status != "ok") throw Error(ErrorCode::DegenerateSupport, cd.status);
      const Dataset noisy =
          add_noise(cd.data, NoiseSpec{key.nsr, cell_seed(cfg.seed, key.dx, key.nsr, key.pairs, key.replicate)});
      AlgorithmOptions opts;
      opts.degree = cfg.degree;
      opts.ladder_size = cfg.ladder_size;
      opts.lcurve_points = cfg.lcurve_points;
      if (cfg.noiseless_support) opts.support_override = cd.R;
      const PreparedProblem prepared = prepare_problem(noisy, opts);
      const auto results_k = run_algorithm1(prepared, opts, cfg.regularizers);
      for (std::size_t q = 0; q < cfg.regularizers.size(); ++q) {
        CellRecord r = base(cfg.regularizers[q]);
        const Algorithm1Result& res = results_k[q];
        r.n_star = res.estimate.basis.dimension();
        r.lambda = res.estimate.lambda;
        r.loss = res.estimate.loss;
        r.R = res.support.R;
        r.error = relative_l2rho_error(res.estimate, truth, res.rho);
        recs.push_back(r);
      }
    } catch (const Error& e) {
      recs.clear();
      for (RegularizerKind kind : cfg.regularizers) {
        CellRecord r = base(kind);
        r.status = to_string(e.code());
        recs.push_back(r);
      }
    }
    store_cell(files[c], identities[c], recs);
    results[c] = std::move(recs);
  });

  RunReport report;
  for (auto& recs : results) {
    for (CellRecord& r : recs) report.records.push_back(std::move(r));
  }
  report.rates = fit_rates(report.records);
  write_report(report, cfg.output_dir);
  return report;
}

std::string records_csv(const std::vector<CellRecord>& records) {
  std::string s = "kernel,dx,nsr,pairs,regularizer,replicate,n_star,lambda,loss,error,R,status\n";
  for (const CellRecord& r : records) {
    s += r.kernel + "," + csv_double(r.dx) + "," + csv_double(r.nsr) + "," + std::to_string(r.pairs) + "," +
         r.regularizer + "," + std::to_string(r.replicate) + "," + std::to_string(r.n_star) + "," +
         csv_double(r.lambda) + "," + csv_double(r.loss) + "," + csv_double(r.error) + "," +
         csv_double(r.R) + "," + r.status + "\n";
  }
  return s;
}

std::string rates_csv(const std::vector<RateRecord>& rates) {
  std::string s = "kernel,nsr,pairs,regularizer,slope_of_mean,mean_slope,std_slope,replicates\n";
  for (const RateRecord& r : rates) {
    s += r.kernel + "," + csv_double(r.nsr) + "," + std::to_string(r.pairs) + "," + r.regularizer + "," +
         csv_double(r.slope_of_mean) + "," + csv_double(r.mean_slope) + "," + csv_double(r.std_slope) + "," +
         std::to_string(r.replicates) + "\n";
  }
  return s;
}

std::vector<CellRecord> parse_records_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("kernel,dx,nsr", 0) != 0) {
    throw Error(ErrorCode::Config, "records CSV has no header");
  }
  std::vector<CellRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 12) throw Error(ErrorCode::Config, "records CSV row has " + std::to_string(f.size()) + " fields");
    CellRecord r;
    r.kernel = f[0];
    r.dx = parse_double(f[1]);
    r.nsr = parse_double(f[2]);
    r.pairs = parse_size(f[3]);
    r.regularizer = f[4];
    r.replicate = parse_size(f[5]);
    r.n_star = parse_size(f[6]);
    r.lambda = parse_double(f[7]);
    r.loss = parse_double(f[8]);
    r.error = parse_double(f[9]);
    r.R = parse_double(f[10]);
    r.status = f[11];
    out.push_back(r);
  }
  return out;
}

void write_report(const RunReport& report, const fs::path& dir) {
  write_text(dir / "records.csv", records_csv(report.records));
  write_text(dir / "rates.csv", rates_csv(report.rates));
}

}  // namespace nlkl
