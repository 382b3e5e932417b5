// Command-line front end: run a single method, check a Lyapunov
// certificate, run the lower-bound experiment, reproduce the full
// benchmark, or re-render a CSV as SVG.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "fdrlab/bench.hpp"
#include "fdrlab/lowerbound.hpp"
#include "fdrlab/lyapunov.hpp"

using namespace fdrlab;
using ordered_json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
  std::uint64_t seed = 1;
  int n_iters = 100;
  double mu = 1e-3;
  double lambda = 1e-3;
  std::string algo = "fdr";
  std::string out;
  std::string format = "json";
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << text;
}

RunTrace dispatch(const CompositeProblem& p, const CommonOpts& o,
                  const ElasticNetInstance& inst) {
  const Vec x0 = Vec::Zero(inst.A.cols());
  const Vec u0 = Vec::Zero(inst.A.cols());
  const int N = o.n_iters;
  if (o.algo == "fdr") return run_fdr(p, x0, u0, N);
  if (o.algo == "drs") return run_drs(p, x0, 1.0, N);
  if (o.algo == "prs") return run_prs(p, x0, 1.0, N);
  if (o.algo == "ohm") return run_ohm(p, x0, 1.0, N);
  if (o.algo == "cp") return run_cp(p, x0, u0, 1.0, 1.0, N);
  if (o.algo == "dys") return run_dys(p, x0, 1.0, N);
  if (o.algo == "fista") {
    return run_fista(p, x0, N, power_iteration_lipschitz(inst.A, inst.mu));
  }
  throw CLI::ValidationError("--algo", "unknown algorithm " + o.algo);
}

int cmd_run(const CommonOpts& o) {
  if (o.n_iters < 1) {
    std::cerr << "run: --n-iters must be >= 1\n";
    return 2;
  }
  auto inst = gen_instance(o.seed, 40, 100, 0.1, 0.01, o.mu, o.lambda);
  inst.reference = compute_reference(inst);
  const auto p = inst.make_problem();
  const auto t = dispatch(p, o, inst);

  bool ok = true;
  for (double v : t.sq_dist) ok = ok && std::isfinite(v);
  const double r2 = p.solution->x_star.squaredNorm() +
                    p.solution->u_star.squaredNorm();
  if (o.algo == "fdr") {
    const double bound =
        r2 / (1.0 + 4.0 * o.n_iters * o.n_iters * p.mu * p.mu);
    ok = ok && t.sq_dist.back() <= bound + 1e-9;
  }

  if (o.format == "csv") {
    BenchmarkReport rep;
    for (std::size_t k = 0; k < t.sq_dist.size(); ++k) {
      rep.rows.push_back({"seed" + std::to_string(o.seed), t.algorithm, k,
                          t.sq_dist[k],
                          std::numeric_limits<double>::quiet_NaN()});
    }
    std::ostringstream ss;
    emit_csv(rep, ss);
    write_text(o.out, ss.str());
  } else {
    ordered_json j;
    j["algorithm"] = t.algorithm;
    j["seed"] = o.seed;
    j["n_iters"] = o.n_iters;
    j["mu"] = o.mu;
    j["lambda"] = o.lambda;
    j["final_sq_dist"] = t.sq_dist.back();
    j["sq_dist"] = t.sq_dist;
    j["prox_calls"] = t.calls.size();
    j["ok"] = ok;
    write_text(o.out, j.dump(2) + "\n");
  }
  return ok ? 0 : 1;
}

int cmd_lyapunov(const CommonOpts& o) {
  if (o.n_iters < 1) {
    std::cerr << "lyapunov: --n-iters must be >= 1\n";
    return 2;
  }
  auto inst = gen_instance(o.seed, 40, 100, 0.1, 0.01, o.mu, o.lambda);
  inst.reference = compute_reference(inst);
  const auto p = inst.make_problem();
  const auto t =
      run_fdr(p, Vec::Zero(100), Vec::Zero(100), o.n_iters);
  const auto cert = build_certificate(t, *p.solution, p.mu);
  const auto rep = check_case_equalities(cert);

  ordered_json j;
  j["N"] = cert.N;
  j["mu"] = cert.mu;
  j["R2"] = cert.R2;
  j["nu"] = cert.nu;
  j["values"] = cert.values;
  j["max_slack"] = cert.max_slack();
  j["case1_gap"] = rep.case1_gap;
  j["case1_ok"] = rep.case1_ok;
  j["dissipative"] = rep.chain_ok;
  j["final_sq_dist"] = t.sq_dist.back();
  write_text(o.out, j.dump(2) + "\n");
  return (rep.case1_ok && rep.chain_ok) ? 0 : 1;
}

int cmd_lowerbound(int N, double mu, const std::string& algo,
                   const std::string& out) {
  const auto r = lowerbound_experiment(algo, N, mu);
  ordered_json j;
  j["N"] = r.N;
  j["mu"] = r.mu;
  j["method"] = r.method;
  j["achieved"] = r.achieved;
  j["floor"] = r.floor;
  j["ceiling"] = r.ceiling;
  j["span_ok"] = r.span_ok;
  j["chain_ok"] = r.chain_ok;
  write_text(out, j.dump(2) + "\n");
  const bool ok = r.achieved >= r.floor - 1e-10 && r.span_ok && r.chain_ok &&
                  (r.method != "fdr" || r.achieved <= r.ceiling + 1e-10);
  return ok ? 0 : 1;
}

int cmd_bench(int n_seeds, std::uint64_t seed0, const std::string& out_dir) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_seeds));
  for (int i = 0; i < n_seeds; ++i) {
    seeds[static_cast<std::size_t>(i)] = seed0 + static_cast<std::uint64_t>(i);
  }
  const auto report = run_benchmark(seeds);
  bool ok = report.flagged.empty();
  for (const auto& r : report.rows) {
    if (r.algorithm == "fdr" && r.sq_dist > r.bound + 1e-9) ok = false;
  }
  emit_csv(report, out_dir + "/bench.csv");
  emit_svg(report, out_dir + "/bench.svg");
  std::cout << "wrote " << out_dir << "/bench.csv and " << out_dir
            << "/bench.svg (" << report.rows.size() << " rows)\n";
  if (!ok) std::cerr << "bound violation or non-finite run detected\n";
  return ok ? 0 : 1;
}

int cmd_plot(const std::string& in, const std::string& out) {
  const auto report = parse_csv_file(in);
  emit_svg(report, out);
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proximal splitting lab"};
  app.require_subcommand(1);

  CommonOpts o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "instance seed");
    sub->add_option("--n-iters", o.n_iters, "iteration count");
    sub->add_option("--mu", o.mu, "strong-convexity parameter");
    sub->add_option("--lambda", o.lambda, "l1 weight");
    sub->add_option("--out", o.out, "output path (default: stdout)");
  };

  auto* run = app.add_subcommand("run", "run one method on an instance");
  add_common(run);
  run->add_option("--algo", o.algo, "fdr|drs|prs|ohm|cp|dys|fista");
  run->add_option("--format", o.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* lyap =
      app.add_subcommand("lyapunov", "build and check a certificate");
  add_common(lyap);

  int lb_N = 1;
  double lb_mu = 1.0;
  std::string lb_algo = "fdr", lb_out;
  auto* lb = app.add_subcommand("lowerbound", "hard-instance experiment");
  lb->add_option("--N", lb_N, "iteration/budget parameter")
      ->check(CLI::PositiveNumber);
  lb->add_option("--mu", lb_mu, "strong-convexity parameter");
  lb->add_option("--algo", lb_algo, "fdr|drs|prs|ohm|cp|dys");
  lb->add_option("--out", lb_out, "output path (default: stdout)");

  int bench_seeds = 100;
  std::uint64_t bench_seed0 = 500;
  std::string bench_out = ".";
  auto* bench = app.add_subcommand("bench", "full multi-method benchmark");
  bench->add_option("--seeds", bench_seeds, "number of instances")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed0", bench_seed0, "first seed");
  bench->add_option("--out", bench_out, "output directory");

  std::string plot_in, plot_out = "plot.svg";
  auto* plot = app.add_subcommand("plot", "render a benchmark CSV as SVG");
  plot->add_option("--in", plot_in, "input CSV")->required();
  plot->add_option("--out", plot_out, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    if (lyap->parsed()) return cmd_lyapunov(o);
    if (lb->parsed()) return cmd_lowerbound(lb_N, lb_mu, lb_algo, lb_out);
    if (bench->parsed()) return cmd_bench(bench_seeds, bench_seed0, bench_out);
    if (plot->parsed()) return cmd_plot(plot_in, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
