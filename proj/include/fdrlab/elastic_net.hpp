#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "fdrlab/prox.hpp"
#include "fdrlab/problem.hpp"

namespace fdrlab {

/// One elastic-net regression instance
///   minimize ||A x - b||^2 + (mu/2) ||x||^2 + lambda ||x||_1
/// with b = A x_true + noise, reproducible from the seed.
struct ElasticNetInstance {
  DenseMatrix A;
  Vec b;
  Vec x_true;
  double mu = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::optional<PrimalDualSolution> reference;

  CompositeProblem make_problem() const {
    CompositeProblem p;
    p.f = make_l1(lambda);
    p.g = make_ridge_ls(A, b, mu);
    p.mu = mu;
    p.solution = reference;
    return p;
  }
};

inline ElasticNetInstance gen_instance(std::uint64_t seed,
                                       Eigen::Index rows = 40,
                                       Eigen::Index cols = 100,
                                       double density = 0.1,
                                       double noise_sd = 0.01,
                                       double mu = 1e-3, double lambda = 1e-3) {
  if (density <= 0.0 || density > 1.0) {
    throw std::invalid_argument("gen_instance: density must be in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  ElasticNetInstance inst;
  inst.seed = seed;
  inst.mu = mu;
  inst.lambda = lambda;
  inst.A.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) inst.A(i, j) = gauss(rng);
  }

  const auto nnz = static_cast<Eigen::Index>(
      std::llround(density * static_cast<double>(cols)));
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(cols));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  inst.x_true = Vec::Zero(cols);
  for (Eigen::Index k = 0; k < nnz; ++k) {
    inst.x_true[idx[static_cast<std::size_t>(k)]] = gauss(rng);
  }

  inst.b = inst.A * inst.x_true;
  if (noise_sd > 0) {
    for (Eigen::Index i = 0; i < rows; ++i) inst.b[i] += noise_sd * gauss(rng);
  }
  return inst;
}

/// Largest squared singular value bound 2 sigma_max(A)^2 + mu by power
/// iteration on A^T A; 200 iterations or relative change below 1e-10.
inline double power_iteration_lipschitz(const DenseMatrix& A, double mu,
                                        std::uint64_t seed = 12345,
                                        int max_iters = 200,
                                        double rel_tol = 1e-10) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(A.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
  v.normalize();
  double lambda_prev = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const Vec w = A.transpose() * (A * v);
    const double lambda = v.dot(w);
    v = w / w.norm();
    if (it > 0 && std::abs(lambda - lambda_prev) <=
                      rel_tol * std::max(1.0, std::abs(lambda))) {
      lambda_prev = lambda;
      break;
    }
    lambda_prev = lambda;
  }
  return 2.0 * lambda_prev + mu;
}

struct KKTReport {
  double max_support_violation = 0.0;  // | -u_i - lambda sign(x_i) | on support
  double max_offsupport_excess = 0.0;  // max(|u_i| - lambda, 0) off support
  bool ok = false;
};

/// Checks -u in lambda d||.||_1(x) componentwise.
inline KKTReport check_kkt(const Vec& x, const Vec& u, double lambda,
                           double tol = 1e-9) {
  KKTReport r;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      const double sign = x[i] > 0 ? 1.0 : -1.0;
      r.max_support_violation =
          std::max(r.max_support_violation, std::abs(-u[i] - lambda * sign));
    } else {
      r.max_offsupport_excess =
          std::max(r.max_offsupport_excess, std::abs(u[i]) - lambda);
    }
  }
  r.ok = r.max_support_violation <= tol && r.max_offsupport_excess <= tol;
  return r;
}

/// Reference primal-dual solution: fixed-step DRS (alpha = 1) to a 1e-13
/// fixed-point residual, then an exact solve on the identified support to
/// polish x_star to machine precision. u_star = 2 A^T(A x_star - b)
/// + mu x_star; throws if the final KKT check fails.
inline PrimalDualSolution compute_reference(const ElasticNetInstance& inst,
                                            std::size_t max_iters = 1000000,
                                            double fp_tol = 1e-13) {
  const RidgeLeastSquares ridge(inst.A, inst.b, inst.mu);
  const double alpha = 1.0;
  Vec z = Vec::Zero(inst.A.cols());
  Vec x = z;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const Vec y = ridge.prox(z, alpha);
    x = prox_l1(2.0 * y - z, alpha, inst.lambda);
    const Vec step = x - y;
    z += step;
    if (step.norm() < fp_tol) break;
  }

  // Support polish: on S = supp(x), stationarity of the smooth part plus
  // the fixed sign pattern gives (2 A^T A + mu I)_SS x_S = (2 A^T b)_S
  // - lambda sign(x_S).
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) support.push_back(i);
  }
  Vec x_star = Vec::Zero(x.size());
  if (!support.empty()) {
    const auto ns = static_cast<Eigen::Index>(support.size());
    DenseMatrix As(inst.A.rows(), ns);
    Vec rhs(ns);
    for (Eigen::Index j = 0; j < ns; ++j) {
      As.col(j) = inst.A.col(support[static_cast<std::size_t>(j)]);
    }
    const Vec Atb = 2.0 * As.transpose() * inst.b;
    for (Eigen::Index j = 0; j < ns; ++j) {
      const double sign = x[support[static_cast<std::size_t>(j)]] > 0 ? 1 : -1;
      rhs[j] = Atb[j] - inst.lambda * sign;
    }
    DenseMatrix M = 2.0 * As.transpose() * As;
    M.diagonal().array() += inst.mu;
    const Vec xs = solve_spd(M, rhs);
    for (Eigen::Index j = 0; j < ns; ++j) {
      x_star[support[static_cast<std::size_t>(j)]] = xs[j];
    }
  }

  PrimalDualSolution sol;
  sol.x_star = x_star;
  sol.u_star = ridge.gradient(x_star);
  if (!check_kkt(sol.x_star, sol.u_star, inst.lambda).ok) {
    throw std::runtime_error("compute_reference: KKT check failed");
  }
  return sol;
}

}  // namespace fdrlab
