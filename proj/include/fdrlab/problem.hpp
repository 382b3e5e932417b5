#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fdrlab/prox.hpp"

namespace fdrlab {

struct PrimalDualSolution {
  Vec x_star;
  Vec u_star;
};

/// The composite pair (f, g): f convex, g mu-strongly convex, both
/// proximable. `solution` carries a certified primal-dual pair when known.
struct CompositeProblem {
  ProxFunction f;
  ProxFunction g;
  double mu = 0.0;
  std::optional<PrimalDualSolution> solution;
};

/// FDR stepsizes eta_k = 2 N mu / (1 + 4 k N mu^2), k = 0..N.
/// Satisfies eta_k (1 + 4 k N mu^2) = 2 N mu for every k.
inline std::vector<double> fdr_schedule(int N, double mu) {
  if (N < 1) throw std::invalid_argument("fdr_schedule: N must be >= 1");
  if (mu <= 0) throw std::invalid_argument("fdr_schedule: mu must be positive");
  std::vector<double> eta(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) {
    eta[static_cast<std::size_t>(k)] =
        2.0 * N * mu / (1.0 + 4.0 * k * N * mu * mu);
  }
  return eta;
}

/// DYS stepsizes gamma_{k+1} = gamma_k / sqrt(1 + 2 gamma_k mu), k = 0..N.
inline std::vector<double> dys_schedule(int N, double gamma0, double mu) {
  if (gamma0 <= 0) throw std::invalid_argument("dys_schedule: gamma0 <= 0");
  std::vector<double> gamma(static_cast<std::size_t>(N) + 1);
  gamma[0] = gamma0;
  for (int k = 0; k < N; ++k) {
    gamma[static_cast<std::size_t>(k) + 1] =
        gamma[static_cast<std::size_t>(k)] /
        std::sqrt(1.0 + 2.0 * gamma[static_cast<std::size_t>(k)] * mu);
  }
  return gamma;
}

/// Accelerated Chambolle-Pock parameters: theta_k = 1/sqrt(1 + 2 mu tau_k),
/// tau_{k+1} = theta_k tau_k, sigma_{k+1} = sigma_k / theta_k.
struct CpSchedule {
  std::vector<double> tau, sigma, theta;
};

inline CpSchedule cp_schedule(int N, double tau0, double sigma0, double mu) {
  if (tau0 * sigma0 > 1.0 + 1e-15) {
    throw std::invalid_argument("cp_schedule: requires tau0 * sigma0 <= 1");
  }
  CpSchedule s;
  s.tau.resize(static_cast<std::size_t>(N) + 1);
  s.sigma.resize(static_cast<std::size_t>(N) + 1);
  s.theta.resize(static_cast<std::size_t>(N));
  s.tau[0] = tau0;
  s.sigma[0] = sigma0;
  for (int k = 0; k < N; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    s.theta[ku] = 1.0 / std::sqrt(1.0 + 2.0 * mu * s.tau[ku]);
    s.tau[ku + 1] = s.theta[ku] * s.tau[ku];
    s.sigma[ku + 1] = s.sigma[ku] / s.theta[ku];
  }
  return s;
}

/// FISTA momentum sequence t_1 = 1, t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2.
inline std::vector<double> fista_t_sequence(int N) {
  std::vector<double> t(static_cast<std::size_t>(N) + 2);
  t[1] = 1.0;
  for (int k = 1; k <= N; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    t[ku + 1] = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t[ku] * t[ku]));
  }
  return t;
}

}  // namespace fdrlab
