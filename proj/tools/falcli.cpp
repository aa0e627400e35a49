// falcli: instance generation, single solves, benchmark suites, certificate
// emission, and rate-trace export for the basis pursuit solver library.
//
// Exit codes: 0 ok, 2 usage error, 3 numeric abort, 4 iteration cap exceeded.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "fal/certify.hpp"
#include "fal/denoise.hpp"
#include "fal/fal.hpp"
#include "fal/io.hpp"
#include "fal/probgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCap = 4;

std::vector<fal::MagnitudeTerm> parse_plan(const std::string& text) {
  // "1e5:33,1:5" -> [(1e5, 33), (1, 5)]
  std::vector<fal::MagnitudeTerm> plan;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--plan", "expected magnitude:count pairs");
    plan.push_back({std::stod(item.substr(0, colon)),
                    std::stoi(item.substr(colon + 1))});
  }
  return plan;
}

fal::StopMode parse_stop(const std::string& name) {
  if (name == "noiseless") return fal::StopMode::Noiseless;
  if (name == "oracle") return fal::StopMode::Oracle;
  if (name == "noisy") return fal::StopMode::Noisy;
  throw CLI::ValidationError("--stop", "must be noiseless|oracle|noisy");
}

fal::BallNorm parse_gamma_norm(const std::string& name) {
  if (name == "1") return fal::BallNorm::L1;
  if (name == "2") return fal::BallNorm::L2;
  if (name == "inf") return fal::BallNorm::Linf;
  throw CLI::ValidationError("--gamma-norm", "must be 1|2|inf");
}

int round_positive(double v) { return static_cast<int>(std::lround(v)); }
int ceil_positive(double v) { return static_cast<int>(std::ceil(v)); }

struct GenArgs {
  std::string family = "dct-100db";
  int n = 4096, m = 1024, s = 10;
  double snr_db = std::numeric_limits<double>::infinity();
  std::string plan;
  std::uint64_t seed = 1;
  std::string out = "instance";
};

fal::SignalSpec to_spec(const GenArgs& a) {
  fal::SignalSpec spec;
  spec.family = fal::family_from_name(a.family);
  spec.n = a.n;
  spec.m = a.m;
  spec.s = a.s;
  spec.seed = a.seed;
  spec.snr_db = a.snr_db;
  if (!a.plan.empty()) spec.plan = parse_plan(a.plan);
  if (spec.family == fal::Family::HardMagnitude && !spec.plan.empty()) {
    int total = 0;
    for (const auto& t : spec.plan) total += t.count;
    spec.s = total;
  }
  return spec;
}

int cmd_gen(const GenArgs& args) {
  const fal::SignalSpec spec = to_spec(args);
  const fal::ProblemInstance inst = fal::generate(spec);
  fal::save_instance(args.out, spec, inst);
  std::cout << "digest=" << fal::instance_digest(inst)
            << " x_l1=" << fal::format_sci(inst.x_true->lpNorm<1>())
            << " s=" << spec.s << "\n";
  return kExitOk;
}

struct SolveArgs {
  std::string instance_dir;
  std::string mode = "bp";  // bp | bpdn
  std::string stop = "noiseless";
  double gamma = 1e-2;
  double delta = -1.0;  // <0: use the instance's recorded radius
  std::string gamma_norm = "2";
  bool theoretical = false;
  double alpha = 0.5;
  double eps_target = 1e-3;
  bool certify = false;
  bool hard_init = false;  // 0.8/0.8/1.9 first-iteration coefficients
  std::string out;
};

int cmd_solve(const SolveArgs& args) {
  const fal::LoadedInstance loaded = fal::load_instance(args.instance_dir);
  const fal::ProblemInstance& inst = loaded.instance;
  const fs::path out_dir =
      args.out.empty() ? fs::path(args.instance_dir) / "solution"
                       : fs::path(args.out);
  fs::create_directories(out_dir);

  fal::FalConfig config;
  config.gamma = args.gamma;
  config.stop_mode = parse_stop(args.stop);
  if (args.hard_init) {
    config.c_lambda_init = 0.8;
    config.c_tau_init = 0.8;
    config.t_init = 1.9;
  }

  fal::Vector x_sol;
  fal::SolveReport report;
  if (args.theoretical) {
    auto result = fal::fal_solve_theoretical(inst, args.alpha, args.eps_target);
    x_sol = std::move(result.x);
    report = std::move(result.report);
    json audit;
    audit["all_pass"] = result.audit.all_pass;
    audit["n_fal_bound"] = result.audit.n_fal_bound;
    audit["n_fal_ok"] = result.audit.n_fal_ok;
    json rows = json::array();
    for (const auto& r : result.audit.rows)
      rows.push_back({{"k", r.k},
                      {"feasibility", r.feasibility},
                      {"feas_bound", r.feas_bound},
                      {"feas_ok", r.feas_ok},
                      {"opt_gap", r.opt_gap},
                      {"opt_bound", r.opt_bound},
                      {"opt_ok", r.opt_ok}});
    audit["rows"] = rows;
    std::ofstream(out_dir / "bound_audit.json") << audit.dump(2) << "\n";
  } else if (args.mode == "bpdn") {
    fal::DenoiseConfig dc;
    dc.base = config;
    dc.delta = args.delta >= 0.0 ? args.delta : inst.delta;
    dc.gamma_norm = parse_gamma_norm(args.gamma_norm);
    auto result = fal::denoise_solve(inst, dc);
    x_sol = std::move(result.x);
    report = std::move(result.report);
    fal::write_vector(out_dir / "s_sol.bin", result.s);
  } else if (args.mode == "bp") {
    auto result = fal::fal_solve(inst, config);
    x_sol = std::move(result.x);
    report = std::move(result.report);
  } else {
    throw CLI::ValidationError("--mode", "must be bp|bpdn");
  }

  fal::write_vector(out_dir / "x_sol.bin", x_sol);
  fal::write_vector(out_dir / "theta.bin", report.theta);
  std::ofstream(out_dir / "report.json")
      << fal::report_to_json(report).dump(2) << "\n";
  std::ofstream(out_dir / "metrics.csv")
      << fal::metric_csv_header() << "\n"
      << fal::metric_csv_line(report) << "\n";

  if (args.certify) {
    const fal::Certificate cert =
        fal::duality_gap_certificate(x_sol, report.theta, inst);
    json cj;
    cj["dual_value"] = cert.dual_value;
    cj["primal_value"] = cert.primal_value;
    cj["gap"] = cert.gap;
    cj["dual_feasibility"] = cert.dual_feasibility;
    std::ofstream(out_dir / "certificate.json") << cj.dump(2) << "\n";
  }

  std::cout << fal::metric_csv_header() << "\n"
            << fal::metric_csv_line(report) << "\n";
  return report.cap_exceeded ? kExitCap : kExitOk;
}

struct BenchArgs {
  std::string suite = "scaling-sparse";
  std::vector<int> sizes = {4096};
  std::vector<double> gammas = {1.0, 0.1, 0.01};
  std::vector<double> snrs = {40.0, 30.0, 20.0};
  int seeds = 10;
  int threads = 1;
  std::string out = "bench";
};

struct BenchCell {
  int n = 0;
  double gamma = 0.0;
  double snr = 0.0;
  std::uint64_t seed = 0;
  fal::SolveReport report;
  double wall_seconds = 0.0;
  bool failed = false;
  std::string error;
};

void write_suite_csv(const fs::path& path, const std::vector<BenchCell>& cells) {
  std::ofstream out(path);
  out << "seed," << fal::metric_csv_header() << "\n";
  // Average and Max rows over numeric columns, as in the benchmark tables.
  std::vector<std::vector<double>> columns;
  for (const auto& cell : cells) {
    if (cell.failed) {
      out << cell.seed << ",FAILED:" << cell.error << "\n";
      continue;
    }
    const fal::SolveReport& r = cell.report;
    const fal::MetricRow& m = r.metrics;
    const std::vector<double> vals = {
        static_cast<double>(r.n_fal), static_cast<double>(r.n_apg),
        static_cast<double>(r.n_mat), m.rel_l1_gap, m.inf_err_plus,
        m.inf_err_zero, m.residual, m.x_l1, m.xtrue_l1, m.rel_l2_error};
    out << cell.seed << ',' << fal::metric_csv_line(r) << "\n";
    columns.push_back(vals);
  }
  if (!columns.empty()) {
    const std::size_t ncol = columns.front().size();
    std::vector<double> avg(ncol, 0.0), mx(ncol, -std::numeric_limits<double>::infinity());
    for (const auto& vals : columns)
      for (std::size_t c = 0; c < ncol; ++c) {
        avg[c] += vals[c] / columns.size();
        mx[c] = std::max(mx[c], vals[c]);
      }
    out << "Average";
    for (const double v : avg) out << ',' << fal::format_sci(v);
    out << "\nMax";
    for (const double v : mx) out << ',' << fal::format_sci(v);
    out << "\n";
  }
}

int cmd_bench(const BenchArgs& args) {
  if (args.seeds < 1) throw CLI::ValidationError("--seeds", "need >= 1");
  fs::create_directories(args.out);

  // Build the cell list in deterministic order.
  struct Task {
    fal::SignalSpec spec;
    double gamma = 0.0;
    double snr = 0.0;
  };
  std::vector<Task> tasks;
  const bool sparse = args.suite == "scaling-sparse";
  const bool dense = args.suite == "scaling-dense";
  const bool noisy = args.suite == "noisy";
  const bool hard = args.suite == "hard";
  const bool rate = args.suite == "rate-trace";
  if (!sparse && !dense && !noisy && !hard && !rate)
    throw CLI::ValidationError("--suite", "unknown suite: " + args.suite);

  if (sparse || dense) {
    for (const int n : args.sizes)
      for (const double gamma : args.gammas)
        for (int seed = 1; seed <= args.seeds; ++seed) {
          Task t;
          t.spec.family = fal::Family::Dct100db;
          t.spec.n = n;
          t.spec.m = n / 4;
          t.spec.s = sparse ? std::max(2, round_positive(t.spec.m / 100.0))
                            : std::max(2, ceil_positive(t.spec.m / 10.0));
          t.spec.seed = static_cast<std::uint64_t>(seed);
          t.gamma = gamma;
          tasks.push_back(t);
        }
  } else if (noisy) {
    for (const int n : args.sizes)
      for (const double snr : args.snrs)
        for (int seed = 1; seed <= args.seeds; ++seed) {
          Task t;
          t.spec.family = fal::Family::GaussianNoisy;
          t.spec.n = n;
          t.spec.m = n / 4;
          t.spec.s = std::max(1, ceil_positive(t.spec.m / 10.0));
          t.spec.snr_db = snr;
          t.spec.seed = static_cast<std::uint64_t>(seed);
          t.snr = snr;
          tasks.push_back(t);
        }
  } else if (hard) {
    for (int seed = 1; seed <= args.seeds; ++seed) {
      Task t1;
      t1.spec.family = fal::Family::HardMagnitude;
      t1.spec.n = 512;
      t1.spec.m = 128;
      t1.spec.plan = {{1e5, 33}, {1.0, 5}};
      t1.spec.s = 38;
      t1.spec.seed = static_cast<std::uint64_t>(seed);
      tasks.push_back(t1);
      Task t4 = t1;
      t4.spec.m = 102;
      t4.spec.plan = {{1e4, 13}, {1.0, 12}, {1e-2, 1}};
      t4.spec.s = 26;
      tasks.push_back(t4);
    }
  } else {  // rate-trace
    Task t;
    t.spec.family = fal::Family::Dct100db;
    t.spec.n = args.sizes.front();
    t.spec.m = t.spec.n / 4;
    t.spec.s = std::max(2, ceil_positive(t.spec.m / 10.0));
    t.spec.seed = 1;
    tasks.push_back(t);
  }

  std::vector<BenchCell> cells(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      BenchCell& cell = cells[i];
      cell.n = t.spec.n;
      cell.gamma = t.gamma;
      cell.snr = t.snr;
      cell.seed = t.spec.seed;
      const auto start = std::chrono::steady_clock::now();
      try {
        const fal::ProblemInstance inst = fal::generate(t.spec);
        if (noisy) {
          fal::DenoiseConfig dc;
          dc.base.stop_mode = fal::StopMode::Noisy;
          dc.base.gamma = inst.rho > 0.0 ? inst.rho : 1e-6;
          dc.delta = inst.delta;
          dc.gamma_norm = fal::BallNorm::L2;
          cell.report = fal::denoise_solve(inst, dc).report;
        } else if (hard) {
          fal::FalConfig config;
          config.stop_mode = fal::StopMode::Noiseless;
          config.gamma = 2.5e-4;
          config.c_lambda_init = 0.8;
          config.c_tau_init = 0.8;
          config.t_init = 1.9;
          cell.report = fal::fal_solve(inst, config).report;
        } else if (rate) {
          fal::FalConfig config;
          config.stop_mode = fal::StopMode::Noiseless;
          config.gamma = 5e-11;
          config.record_inner = true;
          cell.report = fal::fal_solve(inst, config).report;
        } else {
          fal::FalConfig config;
          config.stop_mode = fal::StopMode::Oracle;
          config.gamma = t.gamma;
          cell.report = fal::fal_solve(inst, config).report;
        }
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
      }
      cell.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count();
    }
  };
  const int nthreads = std::max(1, args.threads);
  std::vector<std::thread> pool;
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  // Deterministic aggregation ordered by (n, gamma/snr, seed); task order
  // already is. Wall times go to a sidecar log so CSV/JSON stay byte-stable.
  json sidecar = json::array();
  for (const auto& cell : cells)
    sidecar.push_back({{"n", cell.n},
                       {"gamma", cell.gamma},
                       {"snr", cell.snr},
                       {"seed", cell.seed},
                       {"wall_seconds", cell.wall_seconds}});
  std::ofstream(fs::path(args.out) / "timings.json") << sidecar.dump(2) << "\n";

  if (rate) {
    const fal::SolveReport& r = cells.front().report;
    std::ofstream out(fs::path(args.out) / "rate_trace.csv");
    out << "cum_apg,rel_error,rel_feasibility,rel_optimality\n";
    for (const auto& rec : r.inner)
      out << rec.cum_apg << ',' << fal::format_sci(rec.rel_error) << ','
          << fal::format_sci(rec.rel_feasibility) << ','
          << fal::format_sci(rec.rel_optimality) << "\n";
    return kExitOk;
  }

  // One CSV per (n, gamma) or (n, snr) or suite.
  std::size_t idx = 0;
  if (sparse || dense) {
    for (const int n : args.sizes)
      for (const double gamma : args.gammas) {
        std::vector<BenchCell> group(cells.begin() + idx,
                                     cells.begin() + idx + args.seeds);
        idx += args.seeds;
        std::ostringstream name;
        name << args.suite << "_n" << n << "_gamma" << gamma << ".csv";
        write_suite_csv(fs::path(args.out) / name.str(), group);
      }
  } else if (noisy) {
    for (const int n : args.sizes)
      for (const double snr : args.snrs) {
        std::vector<BenchCell> group(cells.begin() + idx,
                                     cells.begin() + idx + args.seeds);
        idx += args.seeds;
        std::ostringstream name;
        name << "noisy_n" << n << "_snr" << snr << ".csv";
        write_suite_csv(fs::path(args.out) / name.str(), group);
      }
  } else if (hard) {
    std::vector<BenchCell> c1, c2;
    for (std::size_t i = 0; i < cells.size(); i += 2) {
      c1.push_back(cells[i]);
      c2.push_back(cells[i + 1]);
    }
    write_suite_csv(fs::path(args.out) / "hard_case1.csv", c1);
    write_suite_csv(fs::path(args.out) / "hard_case2.csv", c2);
  }

  int exit_code = kExitOk;
  for (const auto& cell : cells)
    if (cell.failed) exit_code = kExitNumeric;
  return exit_code;
}

struct CertifyArgs {
  std::string instance_dir;
  std::string solution_dir;
};

int cmd_certify(const CertifyArgs& args) {
  const fal::LoadedInstance loaded = fal::load_instance(args.instance_dir);
  const fs::path sol = args.solution_dir.empty()
                           ? fs::path(args.instance_dir) / "solution"
                           : fs::path(args.solution_dir);
  const fal::Vector x = fal::read_vector(sol / "x_sol.bin");
  const fal::Vector theta = fal::read_vector(sol / "theta.bin");
  const fal::Certificate cert =
      fal::duality_gap_certificate(x, theta, loaded.instance);
  json cj;
  cj["dual_value"] = cert.dual_value;
  cj["primal_value"] = cert.primal_value;
  cj["gap"] = cert.gap;
  cj["dual_feasibility"] = cert.dual_feasibility;
  std::cout << cj.dump(2) << "\n";
  return kExitOk;
}

struct TraceArgs {
  std::string instance_dir;
  double gamma = 5e-11;
  std::string out;
};

int cmd_trace(const TraceArgs& args) {
  const fal::LoadedInstance loaded = fal::load_instance(args.instance_dir);
  if (!loaded.instance.x_true)
    throw CLI::ValidationError("trace", "instance has no ground truth");
  fal::FalConfig config;
  config.stop_mode = fal::StopMode::Noiseless;
  config.gamma = args.gamma;
  config.record_inner = true;
  const auto result = fal::fal_solve(loaded.instance, config);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out);
    out = &file;
  }
  *out << "cum_apg,rel_error,rel_feasibility,rel_optimality\n";
  for (const auto& rec : result.report.inner)
    *out << rec.cum_apg << ',' << fal::format_sci(rec.rel_error) << ','
         << fal::format_sci(rec.rel_feasibility) << ','
         << fal::format_sci(rec.rel_optimality) << "\n";
  return result.report.cap_exceeded ? kExitCap : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-free first-order augmented Lagrangian solver for basis pursuit"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a problem instance");
  gen->add_option("--family", gen_args.family, "dct-100db|gaussian-noisy|hard");
  gen->add_option("--n", gen_args.n)->check(CLI::PositiveNumber);
  gen->add_option("--m", gen_args.m)->check(CLI::PositiveNumber);
  gen->add_option("--s", gen_args.s)->check(CLI::PositiveNumber);
  gen->add_option("--snr-db", gen_args.snr_db);
  gen->add_option("--plan", gen_args.plan, "magnitude:count,... (hard family)");
  gen->add_option("--seed", gen_args.seed);
  gen->add_option("--out", gen_args.out);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "solve an instance directory");
  solve->add_option("instance", solve_args.instance_dir)->required();
  solve->add_option("--mode", solve_args.mode, "bp|bpdn");
  solve->add_option("--stop", solve_args.stop, "noiseless|oracle|noisy");
  solve->add_option("--gamma", solve_args.gamma);
  solve->add_option("--delta", solve_args.delta);
  solve->add_option("--gamma-norm", solve_args.gamma_norm, "1|2|inf");
  solve->add_flag("--theoretical", solve_args.theoretical);
  solve->add_option("--alpha", solve_args.alpha);
  solve->add_option("--eps-target", solve_args.eps_target);
  solve->add_flag("--certify", solve_args.certify);
  solve->add_flag("--hard-init", solve_args.hard_init);
  solve->add_option("--out", solve_args.out);

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--suite", bench_args.suite,
                    "scaling-sparse|scaling-dense|noisy|hard|rate-trace");
  bench->add_option("--sizes", bench_args.sizes)->delimiter(',');
  bench->add_option("--gammas", bench_args.gammas)->delimiter(',');
  bench->add_option("--snrs", bench_args.snrs)->delimiter(',');
  bench->add_option("--seeds", bench_args.seeds);
  bench->add_option("--threads", bench_args.threads);
  bench->add_option("--out", bench_args.out);

  CertifyArgs certify_args;
  CLI::App* certify = app.add_subcommand("certify", "emit a duality certificate");
  certify->add_option("instance", certify_args.instance_dir)->required();
  certify->add_option("--solution", certify_args.solution_dir);

  TraceArgs trace_args;
  CLI::App* trace = app.add_subcommand("trace", "emit a rate trace");
  trace->add_option("instance", trace_args.instance_dir)->required();
  trace->add_option("--gamma", trace_args.gamma);
  trace->add_option("--out", trace_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_args);
    if (solve->parsed()) return cmd_solve(solve_args);
    if (bench->parsed()) return cmd_bench(bench_args);
    if (certify->parsed()) return cmd_certify(certify_args);
    if (trace->parsed()) return cmd_trace(trace_args);
  } catch (const fal::NumericError& e) {
    std::cerr << "numeric abort: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
