#pragma once

#include <optional>
#include <string>

#include "fdrlab/problem.hpp"
#include "fdrlab/trace.hpp"

namespace fdrlab {

/// Fast Douglas-Rachford splitting with the N-dependent stepsize schedule
/// eta_k = 2 N mu / (1 + 4 k N mu^2):
///   w_0    = x_0 - eta_0 u_0
///   y_{k+1} = prox_{eta_k g}(2 x_k - w_k)
///   w_{k+1} = (1 + eta_{k+1}/eta_k) y_{k+1} - (eta_{k+1}/eta_k)(2 x_k - w_k)
///   x_{k+1} = prox_{eta_{k+1} f}(w_{k+1})
inline RunTrace run_fdr(const CompositeProblem& p, const Vec& x0, const Vec& u0,
                        int N,
                        std::optional<std::size_t> budget = std::nullopt) {
  if (N < 1) throw std::invalid_argument("run_fdr: N must be >= 1");
  const auto eta = fdr_schedule(N, p.mu);
  RunTrace trace;
  trace.algorithm = "fdr";
  OracleSession oracle(p, trace, budget);

  Vec x = x0;
  Vec w = x0 - eta[0] * u0;
  trace.x.push_back(x);
  trace.w.push_back(w);
  trace.u.push_back(u0);
  record_distance(trace, p, x);
  for (int k = 0; k < N; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const Vec s = 2.0 * x - w;
    const Vec y = oracle.prox_g(s, eta[ku]);
    trace.g_subgrad.push_back((s - y) / eta[ku]);
    const double ratio = eta[ku + 1] / eta[ku];
    w = (1.0 + ratio) * y - ratio * s;
    x = oracle.prox_f(w, eta[ku + 1]);
    trace.f_subgrad.push_back((w - x) / eta[ku + 1]);
    trace.y.push_back(y);
    trace.w.push_back(w);
    trace.x.push_back(x);
    record_distance(trace, p, x);
  }
  return trace;
}

/// FDR's update lines with a constant stepsize; reduces to Peaceman-Rachford
/// splitting up to the initialization w_0 = x_0 - alpha u_0.
inline RunTrace run_fdr_constant(const CompositeProblem& p, const Vec& x0,
                                 const Vec& u0, double alpha, int N) {
  if (alpha <= 0) throw std::invalid_argument("run_fdr_constant: alpha <= 0");
  RunTrace trace;
  trace.algorithm = "fdr-constant";
  OracleSession oracle(p, trace);

  Vec x = x0;
  Vec w = x0 - alpha * u0;
  trace.x.push_back(x);
  trace.w.push_back(w);
  for (int k = 0; k < N; ++k) {
    const Vec s = 2.0 * x - w;
    const Vec y = oracle.prox_g(s, alpha);
    w = 2.0 * y - s;
    x = oracle.prox_f(w, alpha);
    trace.y.push_back(y);
    trace.w.push_back(w);
    trace.x.push_back(x);
    record_distance(trace, p, x);
  }
  return trace;
}

/// Douglas-Rachford splitting:
///   x_{k+1/2} = prox_{alpha g}(z_k)
///   x_{k+1}   = prox_{alpha f}(2 x_{k+1/2} - z_k)
///   z_{k+1}   = z_k + x_{k+1} - x_{k+1/2}
inline RunTrace run_drs(const CompositeProblem& p, const Vec& z0, double alpha,
                        int N,
                        std::optional<std::size_t> budget = std::nullopt) {
  if (alpha <= 0) throw std::invalid_argument("run_drs: alpha <= 0");
  RunTrace trace;
  trace.algorithm = "drs";
  OracleSession oracle(p, trace, budget);

  Vec z = z0;
  trace.z.push_back(z);
  for (int k = 0; k < N; ++k) {
    const Vec xg = oracle.prox_g(z, alpha);
    const Vec xf = oracle.prox_f(2.0 * xg - z, alpha);
    z = z + xf - xg;
    trace.y.push_back(xg);
    trace.x.push_back(xf);
    trace.z.push_back(z);
    trace.residual.push_back((xf - xg).norm());
    record_distance(trace, p, xf);
  }
  return trace;
}

/// Peaceman-Rachford splitting on the state z:
///   z_{k+1} = (2 prox_{alpha f} - I)(2 prox_{alpha g} - I) z_k,
/// recording x_{k+1} = prox_{alpha f}((2 prox_{alpha g} - I) z_k).
inline RunTrace run_prs(const CompositeProblem& p, const Vec& z0, double alpha,
                        int N,
                        std::optional<std::size_t> budget = std::nullopt) {
  if (alpha <= 0) throw std::invalid_argument("run_prs: alpha <= 0");
  RunTrace trace;
  trace.algorithm = "prs";
  OracleSession oracle(p, trace, budget);

  Vec z = z0;
  trace.z.push_back(z);
  for (int k = 0; k < N; ++k) {
    const Vec y = oracle.prox_g(z, alpha);
    const Vec r = 2.0 * y - z;
    const Vec x = oracle.prox_f(r, alpha);
    const Vec z_next = 2.0 * x - r;
    trace.residual.push_back((z_next - z).norm());
    z = z_next;
    trace.y.push_back(y);
    trace.x.push_back(x);
    trace.z.push_back(z);
    record_distance(trace, p, x);
  }
  return trace;
}

/// Optimized Halpern method anchored at x_0, applied to the PRS operator
/// T = (2 prox_{alpha g} - I)(2 prox_{alpha f} - I):
///   x_{k+1} = x_0/(k+2) + (k+1)/(k+2) T x_k.
/// `residual` stores ||T x_k - x_k||^2 for k = 0..N-1.
inline RunTrace run_ohm(const CompositeProblem& p, const Vec& x0, double alpha,
                        int N,
                        std::optional<std::size_t> budget = std::nullopt) {
  if (alpha <= 0) throw std::invalid_argument("run_ohm: alpha <= 0");
  RunTrace trace;
  trace.algorithm = "ohm";
  OracleSession oracle(p, trace, budget);

  Vec x = x0;
  trace.x.push_back(x);
  record_distance(trace, p, x);
  for (int k = 0; k < N; ++k) {
    const Vec y = 2.0 * oracle.prox_f(x, alpha) - x;
    const Vec Tx = 2.0 * oracle.prox_g(y, alpha) - y;
    trace.residual.push_back((Tx - x).squaredNorm());
    x = (1.0 / (k + 2.0)) * x0 + ((k + 1.0) / (k + 2.0)) * Tx;
    trace.y.push_back(y);
    trace.x.push_back(x);
    record_distance(trace, p, x);
  }
  return trace;
}

/// Accelerated Chambolle-Pock with z_0 = x_0:
///   u_{k+1} = u_k - sigma_k z_k + sigma_k prox_{f/sigma_k}(z_k - u_k/sigma_k)
///   x_{k+1} = prox_{tau_k g}(x_k + tau_k u_{k+1})
///   z_{k+1} = x_{k+1} + theta_k (x_{k+1} - x_k)
inline RunTrace run_cp(const CompositeProblem& p, const Vec& x0, const Vec& u0,
                       double tau0, double sigma0, int N,
                       std::optional<std::size_t> budget = std::nullopt) {
  const auto sched = cp_schedule(N, tau0, sigma0, p.mu);
  RunTrace trace;
  trace.algorithm = "cp";
  OracleSession oracle(p, trace, budget);

  Vec x = x0;
  Vec u = u0;
  Vec z = x0;
  trace.x.push_back(x);
  trace.u.push_back(u);
  trace.z.push_back(z);
  record_distance(trace, p, x);
  for (int k = 0; k < N; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double sigma = sched.sigma[ku];
    const double tau = sched.tau[ku];
    const Vec yf = oracle.prox_f(z - u / sigma, 1.0 / sigma);
    u = u - sigma * z + sigma * yf;
    const Vec x_next = oracle.prox_g(x + tau * u, tau);
    z = x_next + sched.theta[ku] * (x_next - x);
    x = x_next;
    trace.x.push_back(x);
    trace.u.push_back(u);
    trace.z.push_back(z);
    record_distance(trace, p, x);
  }
  return trace;
}

/// Accelerated Davis-Yin splitting. The initialization prox defines
/// (x_0, u_0) from y_0, and each subsequent sweep evaluates the f-prox with
/// gamma_k and the g-prox with the same gamma_k:
///   y_k     = prox_{gamma_k f}(x_k - gamma_k u_k)
///   x_{k+1} = prox_{gamma_k g}(y_k + gamma_k u_k)
///   u_{k+1} = (y_k + gamma_k u_k - x_{k+1}) / gamma_k
/// The printed x_k/u_k lines overlap with the initialization at k = 0; the
/// loop treats the y-line value as the y_0 entering the k = 1 update, which
/// is the reading under which (x_star, u_star) is a fixed point.
inline RunTrace run_dys(const CompositeProblem& p, const Vec& y0, double gamma0,
                        int N,
                        std::optional<std::size_t> budget = std::nullopt) {
  const auto gamma = dys_schedule(N, gamma0, p.mu);
  RunTrace trace;
  trace.algorithm = "dys";
  trace.metadata["index_convention"] =
      "y-line evaluated from k=0; initialization y_0 only feeds x_0, u_0";
  OracleSession oracle(p, trace, budget);

  Vec x = oracle.prox_g(y0, gamma0);
  Vec u = (y0 - x) / gamma0;
  trace.x.push_back(x);
  trace.u.push_back(u);
  record_distance(trace, p, x);
  for (int k = 0; k < N; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double gk = gamma[ku];
    const Vec y = oracle.prox_f(x - gk * u, gk);
    const Vec x_next = oracle.prox_g(y + gk * u, gk);
    u = (y + gk * u - x_next) / gk;
    x = x_next;
    trace.y.push_back(y);
    trace.x.push_back(x);
    trace.u.push_back(u);
    record_distance(trace, p, x);
  }
  return trace;
}

/// FISTA for smooth g plus proximable f, started at y_1 = x_1:
///   x_{k+1} = prox_{f/L}(y_k - grad g(y_k)/L)
///   y_{k+1} = x_{k+1} + ((t_k - 1)/t_{k+1})(x_{k+1} - x_k)
/// Produces x_1..x_N (N-1 updates). L defaults to g's recorded constant.
inline RunTrace run_fista(const CompositeProblem& p, const Vec& x1, int N,
                          std::optional<double> lipschitz = std::nullopt) {
  if (!p.g.grad) throw std::invalid_argument("run_fista: g lacks a gradient");
  const double L = lipschitz.value_or(p.g.lipschitz);
  if (L <= 0) throw std::invalid_argument("run_fista: need a positive L");
  const auto t = fista_t_sequence(N);
  RunTrace trace;
  trace.algorithm = "fista";
  OracleSession oracle(p, trace);

  auto objective = [&](const Vec& v) {
    return (p.f.value ? p.f.value(v) : 0.0) + p.g.value(v);
  };

  Vec x = x1;
  Vec y = x1;
  trace.x.push_back(x);
  record_distance(trace, p, x);
  if (p.g.value) trace.objective.push_back(objective(x));
  for (int k = 1; k < N; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const Vec x_next = oracle.prox_f(y - p.g.grad(y) / L, 1.0 / L);
    y = x_next + ((t[ku] - 1.0) / t[ku + 1]) * (x_next - x);
    x = x_next;
    trace.x.push_back(x);
    trace.y.push_back(y);
    record_distance(trace, p, x);
    if (p.g.value) trace.objective.push_back(objective(x));
  }
  return trace;
}

}  // namespace fdrlab
