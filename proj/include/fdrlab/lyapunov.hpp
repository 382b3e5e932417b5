#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fdrlab/trace.hpp"

namespace fdrlab {

/// The dissipative sequence V_{-1} >= V_0 >= ... >= V_N certifying the
/// 1/(1 + 4 N^2 mu^2) rate for one FDR run:
///   V_{-1} = nu R^2 - nu^2 ||-2 N mu (x_0 - x_star) + (u_0 - u_star)||^2
///   V_0    = nu^2 ||x_star + 2 N mu u_star - x_0 - 2 N mu u_0||^2
///   V_k    = nu^2 ||D_k x_star + 2 N mu u_star - D_k (2 x_k - w_k)||^2
///   V_N    = ||x_N - x_star||^2 + 4 N^2 mu^2 nu^2 ||u_star + f'(x_N)||^2
/// with D_k = 1 + 4 k N mu^2, nu = 1/(1 + 4 N^2 mu^2) and
/// f'(x_N) = (w_N - x_N)/eta_N taken from the trace's prox residual.
struct LyapunovCertificate {
  int N = 0;
  double mu = 0.0;
  double nu = 0.0;
  double R2 = 0.0;
  double Omega = 0.0;            // 1 + 4 N mu^2, the Case-2 constant
  std::vector<double> Delta;     // D_k = 1 + 4 k N mu^2, k = 0..N
  std::vector<double> values;    // V_{-1}, V_0, ..., V_N (size N + 2)
  std::vector<double> slacks;    // V_{k+1} - V_k along the chain (size N + 1)
  double v0_form_mismatch = 0.0; // |V_0(x0,u0 form) - V_0(2x_0 - w_0 form)|

  double v(int k) const {  // k in {-1, 0, ..., N}
    return values[static_cast<std::size_t>(k + 1)];
  }

  double slack_tolerance(double per_step_tol = 1e-8) const {
    return per_step_tol * std::max(1.0, R2);
  }

  bool dissipative(double per_step_tol = 1e-8) const {
    const double tol = slack_tolerance(per_step_tol);
    for (double s : slacks) {
      if (s > tol) return false;
    }
    return true;
  }

  double max_slack() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double s : slacks) m = std::max(m, s);
    return m;
  }
};

inline LyapunovCertificate build_certificate(const RunTrace& trace,
                                             const PrimalDualSolution& sol,
                                             double mu) {
  if (trace.algorithm != "fdr") {
    throw std::invalid_argument("build_certificate: expects an FDR trace");
  }
  const int N = static_cast<int>(trace.x.size()) - 1;
  if (N < 1 || trace.w.size() != trace.x.size() ||
      trace.f_subgrad.size() != static_cast<std::size_t>(N)) {
    throw std::invalid_argument("build_certificate: incomplete FDR trace");
  }
  const Vec& x0 = trace.x.front();
  const Vec& u0 = trace.u.front();
  const Vec& xs = sol.x_star;
  const Vec& us = sol.u_star;
  const double twoNmu = 2.0 * N * mu;

  LyapunovCertificate cert;
  cert.N = N;
  cert.mu = mu;
  cert.nu = 1.0 / (1.0 + 4.0 * N * N * mu * mu);
  cert.R2 = (x0 - xs).squaredNorm() + (u0 - us).squaredNorm();
  cert.Omega = 1.0 + 4.0 * N * mu * mu;
  cert.Delta.resize(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) {
    cert.Delta[static_cast<std::size_t>(k)] = 1.0 + 4.0 * k * N * mu * mu;
  }

  const double nu = cert.nu;
  cert.values.resize(static_cast<std::size_t>(N) + 2);
  cert.values[0] =
      nu * cert.R2 -
      nu * nu * (-twoNmu * (x0 - xs) + (u0 - us)).squaredNorm();  // V_{-1}
  cert.values[1] =
      nu * nu * (xs + twoNmu * us - x0 - twoNmu * u0).squaredNorm();  // V_0

  // Alternative V_0 evaluated through 2 x_0 - w_0 = x_0 + eta_0 u_0.
  {
    const Vec s0 = 2.0 * trace.x[0] - trace.w[0];
    const double alt = nu * nu * (xs + twoNmu * us - s0).squaredNorm();
    cert.v0_form_mismatch = std::abs(alt - cert.values[1]);
  }

  for (int k = 1; k <= N - 1; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double Dk = cert.Delta[ku];
    const Vec sk = 2.0 * trace.x[ku] - trace.w[ku];
    cert.values[ku + 1] =
        nu * nu * (Dk * xs + twoNmu * us - Dk * sk).squaredNorm();
  }

  const Vec& fpN = trace.f_subgrad.back();  // (w_N - x_N)/eta_N
  cert.values[static_cast<std::size_t>(N) + 1] =
      (trace.x.back() - xs).squaredNorm() +
      twoNmu * twoNmu * nu * nu * (us + fpN).squaredNorm();

  cert.slacks.resize(static_cast<std::size_t>(N) + 1);
  for (std::size_t k = 0; k + 1 < cert.values.size(); ++k) {
    cert.slacks[k] = cert.values[k + 1] - cert.values[k];
  }
  return cert;
}

/// Sign report for the chain: Case 1 is an exact equality; the remaining
/// slacks are nonpositive up to rounding.
struct CaseReport {
  double case1_gap = 0.0;   // |V_0 - V_{-1}|
  double case1_tol = 0.0;
  double max_slack = 0.0;   // most positive of the remaining slacks
  bool case1_ok = false;
  bool chain_ok = false;
};

inline CaseReport check_case_equalities(const LyapunovCertificate& cert,
                                        double case1_tol = 1e-12,
                                        double per_step_tol = 1e-8) {
  CaseReport r;
  r.case1_gap = std::abs(cert.slacks[0]);
  r.case1_tol = case1_tol * std::max(1.0, cert.R2);
  r.case1_ok = r.case1_gap <= r.case1_tol;
  r.max_slack = cert.max_slack();
  r.chain_ok = cert.dissipative(per_step_tol);
  return r;
}

/// Theorem-1 gap R^2/(1 + 4 N^2 mu^2) - ||x_N - x_star||^2; nonnegative
/// (up to rounding) on every valid FDR run.
inline double theorem1_gap(const RunTrace& trace, const PrimalDualSolution& sol,
                           double mu) {
  const int N = static_cast<int>(trace.x.size()) - 1;
  const double R2 = (trace.x.front() - sol.x_star).squaredNorm() +
                    (trace.u.front() - sol.u_star).squaredNorm();
  return R2 / (1.0 + 4.0 * N * N * mu * mu) -
         (trace.x.back() - sol.x_star).squaredNorm();
}

}  // namespace fdrlab
