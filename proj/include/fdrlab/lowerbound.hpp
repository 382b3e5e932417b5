#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdrlab/algorithms.hpp"
#include "fdrlab/lifted.hpp"
#include "fdrlab/sets.hpp"

namespace fdrlab {

/// The 2N+2-dimensional hard instance: minimize mu/2 ||x - x0||^2 over the
/// intersection of shifted segment-product sets C_t and D_t, whose prox
/// maps reveal the frame coordinates e_{-1}, e_0, ..., e_{2N} one at a
/// time. Frame coordinate index c corresponds to e_{c-1}.
struct WorstCaseInstance {
  int N = 0;
  double mu = 0.0;
  OrthonormalFrame frame;  // square, column c = e_{c-1}
  Vec x0, u0;
  Vec t_star;  // coefficients t_0..t_{2N}
  Vec g_star;  // coefficients g_0..g_{2N}
  Vec x_star, u_star;
  SegmentProductSet C, D;

  Eigen::Index dim() const { return frame.ambient_dim(); }

  /// prox_{gamma g}(x0 + y) = x0 + Pi_C((y - gamma u0)/(1 + gamma mu)).
  Vec prox_g(const Vec& z, double gamma) const {
    const Vec c = frame.coordinates((z - x0 - gamma * u0) / (1.0 + gamma * mu));
    return x0 + frame.from_coordinates(project_segment_product(c, C));
  }

  /// prox_{gamma f}(x0 + y) = x0 + Pi_D(y + gamma u0).
  Vec prox_f(const Vec& z, double gamma) const {
    const Vec c = frame.coordinates(z - x0 + gamma * u0);
    return x0 + frame.from_coordinates(project_segment_product(c, D));
  }

  CompositeProblem make_problem() const {
    auto self = std::make_shared<WorstCaseInstance>(*this);
    CompositeProblem p;
    p.mu = mu;
    p.f.prox = [self](const Vec& z, double gamma) {
      return self->prox_f(z, gamma);
    };
    p.f.modulus = 0.0;
    p.g.prox = [self](const Vec& z, double gamma) {
      return self->prox_g(z, gamma);
    };
    p.g.modulus = mu;
    p.solution = PrimalDualSolution{x_star, u_star};
    return p;
  }
};

/// Lemma-4 coefficients, normalized so that
/// ||x0 - x_star||^2 + ||u0 - u_star||^2 = 1.
inline WorstCaseInstance build_worstcase(int N, double mu, const Vec& x0,
                                         double u0_scale = 0.0) {
  if (N < 1) throw std::invalid_argument("build_worstcase: N must be >= 1");
  if (mu <= 0) throw std::invalid_argument("build_worstcase: mu must be > 0");
  const Eigen::Index dim = 2 * N + 2;
  if (x0.size() != dim) {
    throw std::invalid_argument("build_worstcase: x0 must have dim 2N+2");
  }

  WorstCaseInstance inst{
      N, mu, OrthonormalFrame::standard_basis(dim), x0, Vec(), Vec(), Vec(),
      Vec(), Vec(), {}, {}};
  inst.u0 = u0_scale * inst.frame.column(0);  // u0 in span{e_{-1}}

  const double c2N = 1.0 + 2.0 * N * mu;
  inst.t_star.resize(2 * N + 1);
  inst.g_star.resize(2 * N + 1);
  for (int k = 0; k < N; ++k) {
    inst.t_star[2 * k] = std::sqrt(
        mu / (c2N * (1.0 + 2.0 * k * mu) * (1.0 + (2.0 * k + 1.0) * mu)));
    inst.t_star[2 * k + 1] = std::sqrt(
        mu /
        (c2N * (1.0 + (2.0 * k + 1.0) * mu) * (1.0 + (2.0 * k + 2.0) * mu)));
    inst.g_star[2 * k] = -(1.0 + 2.0 * k * mu) * inst.t_star[2 * k];
    inst.g_star[2 * k + 1] =
        (1.0 + (2.0 * k + 2.0) * mu) * inst.t_star[2 * k + 1];
  }
  inst.t_star[2 * N] = 1.0 / c2N;
  inst.g_star[2 * N] = 0.0;

  Vec t_coords = Vec::Zero(dim), g_coords = Vec::Zero(dim);
  t_coords.tail(2 * N + 1) = inst.t_star;
  g_coords.tail(2 * N + 1) = inst.g_star;
  inst.x_star = x0 + inst.frame.from_coordinates(t_coords);
  inst.u_star = inst.u0 + inst.frame.from_coordinates(g_coords);

  // C_t: e_{-1} pinned to 0, e_0 pinned to t_0, segments on (e_{2k-1}, e_{2k}).
  inst.C.dim = dim;
  inst.C.pinned = {{0, 0.0}, {1, inst.t_star[0]}};
  for (int k = 1; k <= N; ++k) {
    inst.C.blocks.push_back(
        {2 * k, 2 * k + 1, inst.t_star[2 * k - 1], inst.t_star[2 * k]});
  }
  inst.C.validate();

  // D_t: e_{-1} pinned to 0, segments on (e_{2k}, e_{2k+1}), e_{2N} free.
  inst.D.dim = dim;
  inst.D.pinned = {{0, 0.0}};
  for (int k = 0; k < N; ++k) {
    inst.D.blocks.push_back(
        {2 * k + 1, 2 * k + 2, inst.t_star[2 * k], inst.t_star[2 * k + 1]});
  }
  inst.D.validate();
  return inst;
}

/// Blockwise normal-cone products at (t_star, g_star); the Lemma-4
/// coefficients satisfy them with equality.
struct NormalConeReport {
  double max_c_block = 0.0;  // |(g_{2k+1}-mu t_{2k+1}, g_{2k+2}-mu t_{2k+2}) . (t_{2k+1}, t_{2k+2})|
  double max_d_block = 0.0;  // |(g_{2k}, g_{2k+1}) . (t_{2k}, t_{2k+1})|
  double g_last = 0.0;       // g_{2N}
  double normalization_gap = 0.0;  // |sum t^2 + sum g^2 - 1|
  bool ok = false;
};

inline NormalConeReport verify_normal_cones(const WorstCaseInstance& inst,
                                            double tol = 1e-12) {
  const Vec& t = inst.t_star;
  const Vec& g = inst.g_star;
  const double mu = inst.mu;
  NormalConeReport r;
  for (int k = 0; k < inst.N; ++k) {
    const double d_block = g[2 * k] * t[2 * k] + g[2 * k + 1] * t[2 * k + 1];
    const double c_block = (g[2 * k + 1] - mu * t[2 * k + 1]) * t[2 * k + 1] +
                           (g[2 * k + 2] - mu * t[2 * k + 2]) * t[2 * k + 2];
    r.max_d_block = std::max(r.max_d_block, std::abs(d_block));
    r.max_c_block = std::max(r.max_c_block, std::abs(c_block));
  }
  r.g_last = g[2 * inst.N];
  r.normalization_gap =
      std::abs(t.squaredNorm() + g.squaredNorm() - 1.0);
  r.ok = r.max_d_block <= tol && r.max_c_block <= tol && r.g_last == 0.0 &&
         r.normalization_gap <= tol;
  return r;
}

/// Zero-chain report for a query z in x0 + S_k: both prox outputs must lie
/// in x0 + S_{k+1}. S_k = span{e_{-1}, ..., e_k} (frame indices 0..k+1).
struct ZeroChainReport {
  double f_leak = 0.0;  // largest coordinate beyond S_{k+1} in the f output
  double g_leak = 0.0;
  bool ok = false;
};

inline ZeroChainReport check_zero_chain(const WorstCaseInstance& inst, int k,
                                        const Vec& z, double gamma,
                                        double tol = 1e-10) {
  if (k < -1 || k > 2 * inst.N - 1) {
    throw std::invalid_argument("check_zero_chain: k out of range");
  }
  auto leak_beyond = [&](const Vec& v, int span_index) {
    const Vec c = inst.frame.coordinates(v - inst.x0);
    double leak = 0.0;
    for (Eigen::Index i = span_index + 2; i < c.size(); ++i) {
      leak = std::max(leak, std::abs(c[i]));
    }
    return leak;
  };
  if (leak_beyond(z, k) > tol) {
    throw std::invalid_argument("check_zero_chain: z not in x0 + S_k");
  }
  ZeroChainReport r;
  r.f_leak = leak_beyond(inst.prox_f(z, gamma), k + 1);
  r.g_leak = leak_beyond(inst.prox_g(z, gamma), k + 1);
  r.ok = r.f_leak <= tol && r.g_leak <= tol;
  return r;
}

/// Proximal span condition on a recorded call log: each query z_i must lie
/// in x0 + span{u0, d_0, ..., d_{i-1}}, and the final output in the full
/// span. Membership is measured by least-squares residual.
struct SpanReport {
  std::vector<double> query_residuals;
  double final_residual = 0.0;
  double max_relative_residual = 0.0;
  bool ok = false;
};

inline SpanReport check_span_condition(const std::vector<ProxCall>& calls,
                                       const Vec& x0, const Vec& u0,
                                       const Vec& x_final, double tol = 1e-8) {
  const Eigen::Index d = x0.size();
  // Orthonormal basis of span{u0, d_0, d_1, ...}, grown one residual at a
  // time; a doubly-orthogonalized Gram-Schmidt pass keeps it accurate.
  DenseMatrix basis(d, std::min<Eigen::Index>(
                           d, static_cast<Eigen::Index>(calls.size()) + 1));
  Eigen::Index ncols = 0;
  auto orthogonalize = [&](Vec v) {
    if (ncols > 0) {
      const auto B = basis.leftCols(ncols);
      v -= B * (B.transpose() * v);
      v -= B * (B.transpose() * v);
    }
    return v;
  };
  auto grow = [&](const Vec& v) {
    if (ncols == basis.cols()) return;
    const Vec r = orthogonalize(v);
    if (r.norm() > 1e-12 * std::max(1.0, v.norm())) {
      basis.col(ncols++) = r / r.norm();
    }
  };
  if (u0.norm() > 0) grow(u0);

  SpanReport r;
  auto residual_of = [&](const Vec& v) { return orthogonalize(v).norm(); };
  for (const ProxCall& call : calls) {
    const Vec q = call.z - x0;
    const double res = residual_of(q);
    const double rel = res / (1.0 + call.z.norm());
    r.query_residuals.push_back(res);
    r.max_relative_residual = std::max(r.max_relative_residual, rel);
    grow(call.d);
  }
  const Vec qf = x_final - x0;
  r.final_residual = residual_of(qf);
  r.max_relative_residual = std::max(
      r.max_relative_residual, r.final_residual / (1.0 + x_final.norm()));
  r.ok = r.max_relative_residual <= tol;
  return r;
}

struct LowerBoundResult {
  std::string method;
  int N = 0;
  double mu = 0.0;
  double achieved = 0.0;
  double floor = 0.0;    // 1/(1 + 4 N^2 mu^2 + 4 N mu), R^2 = 1
  double ceiling = 0.0;  // 1/(1 + 4 N^2 mu^2)
  std::size_t prox_calls = 0;
  bool span_ok = false;
  bool chain_ok = false;  // Lemma-4 identities of the instance
};

/// Runs one method on the hard instance under a 2N prox-call budget and
/// compares the achieved squared error against the theoretical floor.
/// DYS produces x_{N-1} after N evaluations of g (2N - 1 calls), so it is
/// run for N - 1 sweeps; every other method makes exactly 2N calls.
inline LowerBoundResult lowerbound_experiment(const std::string& method, int N,
                                              double mu, double alpha = 1.0,
                                              double u0_scale = 0.0) {
  const Eigen::Index dim = 2 * N + 2;
  const WorstCaseInstance inst =
      build_worstcase(N, mu, Vec::Zero(dim), u0_scale);
  const CompositeProblem p = inst.make_problem();
  const std::size_t budget = static_cast<std::size_t>(2 * N);

  RunTrace trace;
  if (method == "fdr") {
    trace = run_fdr(p, inst.x0, inst.u0, N, budget);
  } else if (method == "drs") {
    trace = run_drs(p, inst.x0 + alpha * inst.u0, alpha, N, budget);
  } else if (method == "prs") {
    trace = run_prs(p, inst.x0 + alpha * inst.u0, alpha, N, budget);
  } else if (method == "ohm") {
    trace = run_ohm(p, inst.x0 - alpha * inst.u0, alpha, N, budget);
  } else if (method == "cp") {
    trace = run_cp(p, inst.x0, inst.u0, 1.0, 1.0, N, budget);
  } else if (method == "dys") {
    trace = run_dys(p, inst.x0 + alpha * inst.u0, alpha, N - 1, budget);
  } else {
    throw std::invalid_argument("lowerbound_experiment: unknown method " +
                                method);
  }

  LowerBoundResult r;
  r.method = method;
  r.N = N;
  r.mu = mu;
  r.achieved = (trace.final_x() - inst.x_star).squaredNorm();
  r.floor = 1.0 / (1.0 + 4.0 * N * N * mu * mu + 4.0 * N * mu);
  r.ceiling = 1.0 / (1.0 + 4.0 * N * N * mu * mu);
  r.prox_calls = trace.calls.size();
  r.span_ok =
      check_span_condition(trace.calls, inst.x0, inst.u0, trace.final_x()).ok;
  r.chain_ok = verify_normal_cones(inst).ok;
  return r;
}

/// Random frame with orthonormal columns plus (x0, u0) with U^T u0 = 0,
/// for exercising the lifted-prox identities.
struct LiftSetup {
  OrthonormalFrame U;
  Vec x0, u0;
};

inline LiftSetup make_random_lift(Eigen::Index d, Eigen::Index d_prime,
                                  std::uint64_t seed) {
  if (d_prime < d) {
    throw std::invalid_argument("make_random_lift: d' must be >= d");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseMatrix G(d_prime, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d_prime; ++i) G(i, j) = gauss(rng);
  }
  const DenseMatrix Q =
      Eigen::HouseholderQR<DenseMatrix>(G).householderQ() *
      DenseMatrix::Identity(d_prime, d);
  OrthonormalFrame U(Q);
  Vec x0(d_prime), v(d_prime);
  for (Eigen::Index i = 0; i < d_prime; ++i) x0[i] = gauss(rng);
  for (Eigen::Index i = 0; i < d_prime; ++i) v[i] = gauss(rng);
  Vec u0 = v - U.from_coordinates(U.coordinates(v));  // in range(I - U U^T)
  return {std::move(U), std::move(x0), std::move(u0)};
}

struct LiftedIdentityReport {
  double max_f_identity = 0.0;  // residual of U^T(z - prox f_U) = z~ - prox f
  double max_g_identity = 0.0;
  double worst_strong_convexity_gap = 0.0;  // most negative margin observed
  int samples = 0;
  bool ok = false;
};

/// Samples random (z, gamma) pairs and checks the projected-residual
/// identities of the lifted prox maps; when the base g supplies values and
/// gradients, also spot-checks mu-strong convexity of the lifted g.
inline LiftedIdentityReport lifted_identity_suite(const ProxFunction& base_f,
                                                  const ProxFunction& base_g,
                                                  double mu, Eigen::Index d,
                                                  Eigen::Index d_prime,
                                                  int samples = 100,
                                                  std::uint64_t seed = 7,
                                                  double tol = 1e-10) {
  const LiftSetup lift = make_random_lift(d, d_prime, seed);
  std::mt19937_64 rng(seed + 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> gamma_dist(0.05, 5.0);

  LiftedIdentityReport r;
  r.samples = samples;
  for (int s = 0; s < samples; ++s) {
    Vec z(d_prime);
    for (Eigen::Index i = 0; i < d_prime; ++i) z[i] = gauss(rng);
    const double gamma = gamma_dist(rng);
    const Vec zt = lift.U.coordinates(z - lift.x0);

    const Vec yf = prox_lifted_f(z, gamma, base_f, lift.U, lift.x0, lift.u0);
    const Vec lhs_f = lift.U.coordinates(z - yf);
    const Vec rhs_f = zt - base_f.prox(zt, gamma);
    r.max_f_identity =
        std::max(r.max_f_identity, (lhs_f - rhs_f).lpNorm<Eigen::Infinity>());

    const Vec yg =
        prox_lifted_g(z, gamma, base_g, lift.U, lift.x0, lift.u0, mu);
    const Vec lhs_g = lift.U.coordinates(z - yg);
    const Vec rhs_g = zt - base_g.prox(zt, gamma);
    r.max_g_identity =
        std::max(r.max_g_identity, (lhs_g - rhs_g).lpNorm<Eigen::Infinity>());

    if (base_g.value && base_g.grad) {
      Vec x(d_prime), y(d_prime);
      for (Eigen::Index i = 0; i < d_prime; ++i) x[i] = gauss(rng);
      for (Eigen::Index i = 0; i < d_prime; ++i) y[i] = gauss(rng);
      const Vec xt = lift.U.coordinates(x - lift.x0);
      const Vec v = lifted_g_subgrad(x, base_g.grad(xt), lift.U, lift.x0,
                                     lift.u0, mu);
      const double margin =
          lifted_g_value(y, base_g, lift.U, lift.x0, lift.u0, mu) -
          lifted_g_value(x, base_g, lift.U, lift.x0, lift.u0, mu) -
          v.dot(y - x) - 0.5 * mu * (y - x).squaredNorm();
      r.worst_strong_convexity_gap =
          std::min(r.worst_strong_convexity_gap, margin);
    }
  }
  r.ok = r.max_f_identity <= tol && r.max_g_identity <= tol &&
         r.worst_strong_convexity_gap >= -1e-9;
  return r;
}

}  // namespace fdrlab
