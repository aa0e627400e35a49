#include "fal/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fal/rng.hpp"

namespace fal {

namespace {

using nlohmann::json;

// Files are written in little-endian layout; this code targets
// little-endian hosts (asserted here rather than byte-swapped).
static_assert(std::endian::native == std::endian::little,
              "binary vector format assumes a little-endian host");

json spec_to_json(const SignalSpec& spec) {
  json j;
  j["family"] = family_name(spec.family);
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["s"] = spec.s;
  j["seed"] = spec.seed;
  if (std::isfinite(spec.snr_db)) j["snr_db"] = spec.snr_db;
  if (!spec.plan.empty()) {
    json plan = json::array();
    for (const auto& term : spec.plan)
      plan.push_back({{"magnitude", term.magnitude}, {"count", term.count}});
    j["plan"] = plan;
  }
  return j;
}

SignalSpec spec_from_json(const json& j) {
  SignalSpec spec;
  spec.family = family_from_name(j.at("family").get<std::string>());
  spec.n = j.at("n").get<int>();
  spec.m = j.at("m").get<int>();
  spec.s = j.at("s").get<int>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("snr_db")) spec.snr_db = j.at("snr_db").get<double>();
  if (j.contains("plan"))
    for (const auto& term : j.at("plan"))
      spec.plan.push_back(
          {term.at("magnitude").get<double>(), term.at("count").get<int>()});
  return spec;
}

}  // namespace

void write_vector(const std::filesystem::path& path, const Vector& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  const std::uint64_t count = static_cast<std::uint64_t>(v.size());
  out.write(reinterpret_cast<const char*>(&count), 8);
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Vector read_vector(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for read: " + path.string());
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), 8);
  Vector v(static_cast<Eigen::Index>(count));
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw std::runtime_error("truncated vector file: " + path.string());
  return v;
}

void save_instance(const std::filesystem::path& dir, const SignalSpec& spec,
                   const ProblemInstance& instance) {
  std::filesystem::create_directories(dir);
  json j = spec_to_json(spec);
  j["rho"] = instance.rho;
  j["delta"] = instance.delta;
  json op;
  op["kind"] = instance.op->kind();
  op["m"] = instance.op->rows();
  op["n"] = instance.op->cols();
  if (const auto* dct =
          dynamic_cast<const PartialDctOperator*>(instance.op.get())) {
    op["rows"] = dct->row_indices();
  } else {
    op["seed"] = spec.seed;  // dense matrices are regenerated from the seed
  }
  j["operator"] = op;

  std::ofstream out(dir / "spec.json");
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: spec.json");

  write_vector(dir / "b.bin", instance.b);
  if (instance.x_true) write_vector(dir / "x_true.bin", *instance.x_true);
}

LoadedInstance load_instance(const std::filesystem::path& dir) {
  std::ifstream in(dir / "spec.json");
  if (!in) throw std::runtime_error("cannot read spec.json in " + dir.string());
  json j;
  in >> j;

  LoadedInstance loaded;
  loaded.spec = spec_from_json(j);
  const json& op = j.at("operator");
  const std::string kind = op.at("kind").get<std::string>();
  if (kind == "partial-dct") {
    loaded.instance.op = std::make_shared<PartialDctOperator>(
        op.at("n").get<int>(), op.at("rows").get<std::vector<int>>());
  } else if (kind == "dense") {
    // Regenerate the Gaussian matrix from the recorded seed, exactly as the
    // generator produced it.
    const int m = op.at("m").get<int>();
    const int n = op.at("n").get<int>();
    Rng mat_rng(op.at("seed").get<std::uint64_t>(), "matrix");
    Matrix a(m, n);
    for (int i = 0; i < m; ++i)
      for (int jj = 0; jj < n; ++jj) a(i, jj) = mat_rng.normal();
    loaded.instance.op = std::make_shared<DenseOperator>(
        std::move(a), estimate_sigma_min_gaussian(m, n));
  } else {
    throw std::runtime_error("unknown operator kind: " + kind);
  }

  loaded.instance.b = read_vector(dir / "b.bin");
  if (std::filesystem::exists(dir / "x_true.bin"))
    loaded.instance.x_true = read_vector(dir / "x_true.bin");
  loaded.instance.rho = j.value("rho", 0.0);
  loaded.instance.delta = j.value("delta", 0.0);
  return loaded;
}

std::string instance_digest(const ProblemInstance& instance) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto* bytes = reinterpret_cast<const unsigned char*>(instance.b.data());
  const std::size_t len = instance.b.size() * sizeof(double);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json report_to_json(const SolveReport& report) {
  json j;
  j["n_fal"] = report.n_fal;
  j["n_apg"] = report.n_apg;
  j["n_mat"] = report.n_mat;
  j["converged"] = report.converged;
  j["cap_exceeded"] = report.cap_exceeded;

  json outer = json::array();
  for (const auto& row : report.outer) {
    outer.push_back({{"k", row.k},
                     {"lam", row.lam},
                     {"eps", row.eps},
                     {"tau", row.tau},
                     {"theta_norm", row.theta_norm},
                     {"eta_k", row.eta_k},
                     {"L", row.step_l},
                     {"xi", row.xi},
                     {"inner", row.inner},
                     {"ell_max", row.ell_max},
                     {"exit", std::string(1, row.exit)},
                     {"subgrad_norm", row.subgrad_norm}});
  }
  j["outer"] = outer;

  if (!report.inner.empty()) {
    json inner = json::array();
    for (const auto& rec : report.inner)
      inner.push_back({{"cum_apg", rec.cum_apg},
                       {"rel_error", rec.rel_error},
                       {"rel_feasibility", rec.rel_feasibility},
                       {"rel_optimality", rec.rel_optimality}});
    j["inner"] = inner;
  }

  const MetricRow& m = report.metrics;
  json metrics;
  metrics["residual"] = m.residual;
  metrics["x_l1"] = m.x_l1;
  if (m.has_truth) {
    metrics["rel_l1_gap"] = m.rel_l1_gap;
    metrics["inf_err_plus"] = m.inf_err_plus;
    metrics["inf_err_zero"] = m.inf_err_zero;
    metrics["rel_l2_error"] = m.rel_l2_error;
    metrics["xtrue_l1"] = m.xtrue_l1;
  }
  j["metrics"] = metrics;
  return j;
}

std::string format_sci(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string metric_csv_header() {
  return "N_FAL,N_APG,nMat,rel_l1_gap,inf_err_plus,inf_err_zero,residual,"
         "x_l1,xtrue_l1,rel_l2_error";
}

std::string metric_csv_line(const SolveReport& report) {
  const MetricRow& m = report.metrics;
  std::ostringstream os;
  os << report.n_fal << ',' << report.n_apg << ',' << report.n_mat << ','
     << format_sci(m.rel_l1_gap) << ',' << format_sci(m.inf_err_plus) << ','
     << format_sci(m.inf_err_zero) << ',' << format_sci(m.residual) << ','
     << format_sci(m.x_l1) << ',' << format_sci(m.xtrue_l1) << ','
     << format_sci(m.rel_l2_error);
  return os.str();
}

}  // namespace fal
