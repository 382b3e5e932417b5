#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fdrlab/algorithms.hpp"
#include "fdrlab/elastic_net.hpp"

namespace fdrlab {

struct BenchRow {
  std::string instance_id;
  std::string algorithm;
  std::size_t k = 0;
  double sq_dist = 0.0;
  double bound = std::numeric_limits<double>::quiet_NaN();  // FDR rows only
};

struct BenchAggregate {
  std::size_t k = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double bound_median = std::numeric_limits<double>::quiet_NaN();
};

struct BenchmarkReport {
  std::vector<BenchRow> rows;
  std::map<std::string, std::string> metadata;
  std::vector<std::string> flagged;  // instances with non-finite iterates

  std::vector<std::string> algorithms() const {
    std::set<std::string> seen;
    for (const auto& r : rows) seen.insert(r.algorithm);
    return {seen.begin(), seen.end()};
  }

  std::vector<BenchAggregate> aggregate(const std::string& algorithm) const;
};

namespace detail {

// Linear-interpolation quantile on a sorted copy (matches the common
// "type 7" convention).
inline double quantile(std::vector<double> v, double p) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

inline std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline std::vector<BenchAggregate> BenchmarkReport::aggregate(
    const std::string& algorithm) const {
  std::map<std::size_t, std::vector<double>> errs;
  std::map<std::size_t, std::vector<double>> bounds;
  for (const auto& r : rows) {
    if (r.algorithm != algorithm) continue;
    errs[r.k].push_back(r.sq_dist);
    if (std::isfinite(r.bound)) bounds[r.k].push_back(r.bound);
  }
  std::vector<BenchAggregate> out;
  for (auto& [k, v] : errs) {
    BenchAggregate a;
    a.k = k;
    a.median = detail::quantile(v, 0.5);
    a.q1 = detail::quantile(v, 0.25);
    a.q3 = detail::quantile(v, 0.75);
    if (auto it = bounds.find(k); it != bounds.end()) {
      a.bound_median = detail::quantile(it->second, 0.5);
    }
    out.push_back(a);
  }
  return out;
}

inline std::vector<std::size_t> default_k_grid() {
  return {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000};
}

inline std::vector<std::string> default_bench_algorithms() {
  return {"fdr", "drs", "prs", "ohm", "cp", "dys", "fista"};
}

inline unsigned bench_thread_count() {
  if (const char* env = std::getenv("FDR_LAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n >= 1) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

namespace detail {

// Squared distance after k prox sweeps, adjusting for each runner's
// recording offset (some log the initial iterate, some start at k=1).
inline double dist_at(const RunTrace& trace, std::size_t k) {
  const std::string& a = trace.algorithm;
  std::size_t idx;
  if (a == "drs" || a == "prs" || a == "fista") {
    if (k == 0) throw std::out_of_range("dist_at: no k=0 iterate for " + a);
    idx = k - 1;
  } else {
    idx = k;
  }
  return trace.sq_dist.at(idx);
}

struct InstanceResult {
  std::vector<BenchRow> rows;
  bool finite = true;
  std::string instance_id;
};

inline InstanceResult bench_one_instance(
    std::uint64_t seed, const std::vector<std::string>& algorithms,
    const std::vector<std::size_t>& k_grid) {
  ElasticNetInstance inst = gen_instance(seed);
  inst.reference = compute_reference(inst);
  const CompositeProblem p = inst.make_problem();
  const Eigen::Index d = inst.A.cols();
  const Vec x0 = Vec::Zero(d);
  const Vec u0 = Vec::Zero(d);
  const std::size_t k_max = *std::max_element(k_grid.begin(), k_grid.end());
  const double r2 = (x0 - p.solution->x_star).squaredNorm() +
                    (u0 - p.solution->u_star).squaredNorm();

  InstanceResult res;
  res.instance_id = "seed" + std::to_string(seed);
  auto push = [&](const std::string& algo, std::size_t k, double err,
                  double bound) {
    if (!std::isfinite(err)) res.finite = false;
    res.rows.push_back({res.instance_id, algo, k, err, bound});
  };

  for (const auto& algo : algorithms) {
    if (algo == "fdr") {
      // Terminal-iterate protocol: a fresh N=k run per grid point.
      for (std::size_t k : k_grid) {
        const RunTrace t = run_fdr(p, x0, u0, static_cast<int>(k));
        const double kk = static_cast<double>(k);
        push(algo, k, t.sq_dist.back(),
             r2 / (1.0 + 4.0 * kk * kk * p.mu * p.mu));
      }
      continue;
    }
    RunTrace t;
    if (algo == "drs") {
      t = run_drs(p, x0 + u0, 1.0, static_cast<int>(k_max));
    } else if (algo == "prs") {
      t = run_prs(p, x0 + u0, 1.0, static_cast<int>(k_max));
    } else if (algo == "ohm") {
      t = run_ohm(p, x0, 1.0, static_cast<int>(k_max));
    } else if (algo == "cp") {
      t = run_cp(p, x0, u0, 1.0, 1.0, static_cast<int>(k_max));
    } else if (algo == "dys") {
      t = run_dys(p, x0 + u0, 1.0, static_cast<int>(k_max));
    } else if (algo == "fista") {
      const double lip = power_iteration_lipschitz(inst.A, inst.mu);
      t = run_fista(p, x0, static_cast<int>(k_max), lip);
    } else {
      throw std::invalid_argument("bench: unknown algorithm " + algo);
    }
    for (std::size_t k : k_grid) {
      push(algo, k, dist_at(t, k),
           std::numeric_limits<double>::quiet_NaN());
    }
  }
  return res;
}

}  // namespace detail

/// Runs every algorithm over every seeded instance. Work is distributed
/// over a pool bounded by FDR_LAB_THREADS; rows are assembled in seed
/// order so the output is identical for any worker count.
inline BenchmarkReport run_benchmark(
    const std::vector<std::uint64_t>& seeds,
    const std::vector<std::string>& algorithms = default_bench_algorithms(),
    const std::vector<std::size_t>& k_grid = default_k_grid()) {
  if (seeds.empty()) throw std::invalid_argument("run_benchmark: no seeds");
  if (algorithms.empty()) {
    throw std::invalid_argument("run_benchmark: no algorithms");
  }
  if (k_grid.empty()) throw std::invalid_argument("run_benchmark: no k_grid");

  std::vector<detail::InstanceResult> results(seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      try {
        results[i] = detail::bench_one_instance(seeds[i], algorithms, k_grid);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const unsigned pool =
      std::min<unsigned>(bench_thread_count(),
                         static_cast<unsigned>(seeds.size()));
  std::vector<std::thread> threads;
  for (unsigned t = 0; t + 1 < pool; ++t) threads.emplace_back(worker);
  worker();
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);

  BenchmarkReport report;
  report.metadata["matrix_distribution"] = "standard_normal";
  report.metadata["x0"] = "zero";
  report.metadata["u0"] = "zero";
  report.metadata["fista_lipschitz"] = "power_iteration";
  for (auto& r : results) {
    if (!r.finite) report.flagged.push_back(r.instance_id);
    report.rows.insert(report.rows.end(), r.rows.begin(), r.rows.end());
  }
  return report;
}

inline void emit_csv(const BenchmarkReport& report, std::ostream& out) {
  if (report.rows.empty()) throw std::invalid_argument("emit_csv: no rows");
  out << "instance_id,algorithm,k,sq_dist,bound\n";
  for (const auto& r : report.rows) {
    out << r.instance_id << ',' << r.algorithm << ',' << r.k << ','
        << detail::fmt_g17(r.sq_dist) << ',' << detail::fmt_g17(r.bound)
        << '\n';
  }
  if (!out) throw std::runtime_error("emit_csv: write failure");
}

inline void emit_csv(const BenchmarkReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  emit_csv(report, out);
}

inline BenchmarkReport parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "instance_id,algorithm,k,sq_dist,bound") {
    throw std::runtime_error("parse_csv: bad header");
  }
  BenchmarkReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    BenchRow r;
    std::string field;
    std::getline(ss, r.instance_id, ',');
    std::getline(ss, r.algorithm, ',');
    std::getline(ss, field, ',');
    r.k = std::stoull(field);
    std::getline(ss, field, ',');
    r.sq_dist = std::stod(field);
    std::getline(ss, field, ',');
    r.bound = std::stod(field);
    report.rows.push_back(std::move(r));
  }
  return report;
}

inline BenchmarkReport parse_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_csv: cannot open " + path);
  return parse_csv(in);
}

namespace detail {

struct SvgScale {
  double x_min, x_max, y_min, y_max;  // log10 units
  double left = 70, right = 780, top = 30, bottom = 540;

  double px(double k) const {
    return left + (std::log10(k) - x_min) / (x_max - x_min) * (right - left);
  }
  double py(double v) const {
    const double lv = std::log10(std::max(v, 1e-300));
    return bottom - (lv - y_min) / (y_max - y_min) * (bottom - top);
  }
};

inline std::string svg_poly(const std::vector<std::pair<double, double>>& pts,
                            const SvgScale& s) {
  std::string d;
  for (const auto& [k, v] : pts) {
    d += fmt_g17(s.px(k)).substr(0, 8) + "," + fmt_g17(s.py(v)).substr(0, 8) +
         " ";
  }
  return d;
}

}  // namespace detail

/// Hand-rolled SVG 1.1: log-log axes, one median polyline per algorithm,
/// a shaded interquartile band each, and a dashed theoretical-bound curve.
inline void emit_svg(const BenchmarkReport& report, std::ostream& out) {
  if (report.rows.empty()) throw std::invalid_argument("emit_svg: no rows");
  const std::vector<std::string> algos = report.algorithms();

  detail::SvgScale s{1e300, -1e300, 1e300, -1e300};
  auto widen = [&](double k, double v) {
    if (!(v > 0) || !std::isfinite(v)) return;
    s.x_min = std::min(s.x_min, std::log10(static_cast<double>(k)));
    s.x_max = std::max(s.x_max, std::log10(static_cast<double>(k)));
    s.y_min = std::min(s.y_min, std::log10(v));
    s.y_max = std::max(s.y_max, std::log10(v));
  };
  std::map<std::string, std::vector<BenchAggregate>> aggs;
  for (const auto& a : algos) {
    aggs[a] = report.aggregate(a);
    for (const auto& g : aggs[a]) {
      widen(static_cast<double>(g.k), g.q1);
      widen(static_cast<double>(g.k), g.q3);
      widen(static_cast<double>(g.k), g.median);
      if (std::isfinite(g.bound_median)) {
        widen(static_cast<double>(g.k), g.bound_median);
      }
    }
  }
  if (s.x_max <= s.x_min) s.x_max = s.x_min + 1;
  if (s.y_max <= s.y_min) s.y_max = s.y_min + 1;

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf"};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\"860\" height=\"600\" viewBox=\"0 0 860 600\">\n"
      << "<rect width=\"860\" height=\"600\" fill=\"white\"/>\n"
      << "<text x=\"400\" y=\"575\" font-size=\"14\">iterations k "
         "(log)</text>\n"
      << "<text x=\"16\" y=\"300\" font-size=\"14\" "
         "transform=\"rotate(-90 16 300)\">squared distance to solution "
         "(log)</text>\n";
  // y-axis decade gridlines
  for (int e = static_cast<int>(std::ceil(s.y_min));
       e <= static_cast<int>(std::floor(s.y_max)); ++e) {
    const double y = s.py(std::pow(10.0, e));
    out << "<line x1=\"" << s.left << "\" y1=\"" << y << "\" x2=\"" << s.right
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"8\" y=\"" << y + 4 << "\" font-size=\"11\">1e" << e
        << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(s.x_min));
       e <= static_cast<int>(std::floor(s.x_max)); ++e) {
    const double x = s.px(std::pow(10.0, e));
    out << "<line x1=\"" << x << "\" y1=\"" << s.top << "\" x2=\"" << x
        << "\" y2=\"" << s.bottom << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << x - 8 << "\" y=\"" << s.bottom + 16
        << "\" font-size=\"11\">1e" << e << "</text>\n";
  }

  int color = 0;
  double legend_y = 45;
  for (const auto& algo : algos) {
    const auto& agg = aggs[algo];
    if (agg.empty()) continue;
    const char* c = palette[color % 7];
    ++color;
    // interquartile band: q3 forward, q1 backward
    std::vector<std::pair<double, double>> band;
    for (const auto& g : agg) band.emplace_back(double(g.k), g.q3);
    for (auto it = agg.rbegin(); it != agg.rend(); ++it) {
      band.emplace_back(double(it->k), it->q1);
    }
    out << "<polygon points=\"" << detail::svg_poly(band, s) << "\" fill=\""
        << c << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    std::vector<std::pair<double, double>> med;
    for (const auto& g : agg) med.emplace_back(double(g.k), g.median);
    out << "<polyline points=\"" << detail::svg_poly(med, s)
        << "\" fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.8\"/>\n";
    out << "<text x=\"700\" y=\"" << legend_y << "\" font-size=\"12\" fill=\""
        << c << "\">" << algo << "</text>\n";
    legend_y += 16;

    std::vector<std::pair<double, double>> bnd;
    for (const auto& g : agg) {
      if (std::isfinite(g.bound_median)) {
        bnd.emplace_back(double(g.k), g.bound_median);
      }
    }
    if (!bnd.empty()) {
      out << "<polyline points=\"" << detail::svg_poly(bnd, s)
          << "\" fill=\"none\" stroke=\"" << c
          << "\" stroke-width=\"1.2\" stroke-dasharray=\"6,4\"/>\n";
      out << "<text x=\"700\" y=\"" << legend_y
          << "\" font-size=\"12\" fill=\"" << c << "\">" << algo
          << " bound</text>\n";
      legend_y += 16;
    }
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("emit_svg: write failure");
}

inline void emit_svg(const BenchmarkReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_svg: cannot open " + path);
  emit_svg(report, out);
}

}  // namespace fdrlab
