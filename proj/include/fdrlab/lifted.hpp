#pragma once

#include <stdexcept>

#include "fdrlab/core.hpp"
#include "fdrlab/prox.hpp"

namespace fdrlab {

// Lifting of a d-dimensional function pair into d' >= d dimensions through
// a frame U with orthonormal columns, a base point x0 and a tilt u0 with
// U^T u0 = 0:
//   f_U(x) = f(U^T (x - x0)) - <u0, x - x0>
//   g_U(x) = g(U^T (x - x0)) + <u0, x - x0> + (mu/2) ||P (x - x0)||^2
// with P = I - U U^T. Both prox maps split along range(U) and range(P).

namespace detail {
inline void check_lift_inputs(const OrthonormalFrame& U, const Vec& x0,
                              const Vec& u0) {
  if (U.ambient_dim() != x0.size() || U.ambient_dim() != u0.size()) {
    throw std::invalid_argument("lifted prox: ambient dimension mismatch");
  }
  if (U.coordinates(u0).lpNorm<Eigen::Infinity>() > 1e-12) {
    throw std::invalid_argument("lifted prox: U^T u0 must vanish");
  }
}
}  // namespace detail

/// prox_{gamma f_U}(z) = x0 + U prox_{gamma f}(z~) + p_z + gamma u0,
/// where z~ = U^T (z - x0) and p_z = (I - U U^T)(z - x0).
inline Vec prox_lifted_f(const Vec& z, double gamma, const ProxFunction& base,
                         const OrthonormalFrame& U, const Vec& x0,
                         const Vec& u0) {
  detail::check_lift_inputs(U, x0, u0);
  const Vec zt = U.coordinates(z - x0);
  const Vec pz = (z - x0) - U.from_coordinates(zt);
  return x0 + U.from_coordinates(base.prox(zt, gamma)) + pz + gamma * u0;
}

/// prox_{gamma g_U}(z) = x0 + U prox_{gamma g}(z~)
///                       + (p_z - gamma u0) / (1 + gamma mu).
inline Vec prox_lifted_g(const Vec& z, double gamma, const ProxFunction& base,
                         const OrthonormalFrame& U, const Vec& x0,
                         const Vec& u0, double mu) {
  detail::check_lift_inputs(U, x0, u0);
  const Vec zt = U.coordinates(z - x0);
  const Vec pz = (z - x0) - U.from_coordinates(zt);
  return x0 + U.from_coordinates(base.prox(zt, gamma)) +
         (pz - gamma * u0) / (1.0 + gamma * mu);
}

/// Value of the lifted f (requires base.value).
inline double lifted_f_value(const Vec& x, const ProxFunction& base,
                             const OrthonormalFrame& U, const Vec& x0,
                             const Vec& u0) {
  return base.value(U.coordinates(x - x0)) - u0.dot(x - x0);
}

/// Value of the lifted g (requires base.value).
inline double lifted_g_value(const Vec& x, const ProxFunction& base,
                             const OrthonormalFrame& U, const Vec& x0,
                             const Vec& u0, double mu) {
  const Vec xt = U.coordinates(x - x0);
  const Vec p = (x - x0) - U.from_coordinates(xt);
  return base.value(xt) + u0.dot(x - x0) + 0.5 * mu * p.squaredNorm();
}

/// A subgradient of the lifted g at x, given a subgradient s of the base g
/// at U^T (x - x0): U s + u0 + mu P (x - x0).
inline Vec lifted_g_subgrad(const Vec& x, const Vec& base_subgrad,
                            const OrthonormalFrame& U, const Vec& x0,
                            const Vec& u0, double mu) {
  const Vec xt = U.coordinates(x - x0);
  const Vec p = (x - x0) - U.from_coordinates(xt);
  return U.from_coordinates(base_subgrad) + u0 + mu * p;
}

inline ProxFunction make_lifted_f(ProxFunction base, OrthonormalFrame U,
                                  Vec x0, Vec u0) {
  ProxFunction p;
  const bool has_value = static_cast<bool>(base.value);
  p.prox = [base, U, x0, u0](const Vec& z, double gamma) {
    return prox_lifted_f(z, gamma, base, U, x0, u0);
  };
  if (has_value) {
    p.value = [base, U, x0, u0](const Vec& x) {
      return lifted_f_value(x, base, U, x0, u0);
    };
  }
  p.modulus = 0.0;
  return p;
}

inline ProxFunction make_lifted_g(ProxFunction base, OrthonormalFrame U,
                                  Vec x0, Vec u0, double mu) {
  ProxFunction p;
  const bool has_value = static_cast<bool>(base.value);
  p.prox = [base, U, x0, u0, mu](const Vec& z, double gamma) {
    return prox_lifted_g(z, gamma, base, U, x0, u0, mu);
  };
  if (has_value) {
    p.value = [base, U, x0, u0, mu](const Vec& x) {
      return lifted_g_value(x, base, U, x0, u0, mu);
    };
  }
  p.modulus = mu;
  return p;
}

}  // namespace fdrlab
