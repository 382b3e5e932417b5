#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

#include "fdrlab/core.hpp"

namespace fdrlab {

/// Oracle bundle for one proximable function. `prox` is always present;
/// `value`, `grad` and `lipschitz` are filled only when the function
/// supports them. `modulus` is the strong-convexity parameter (0 if the
/// function is merely convex).
struct ProxFunction {
  std::function<Vec(const Vec&, double)> prox;
  std::function<double(const Vec&)> value;  // may be empty
  std::function<Vec(const Vec&)> grad;      // may be empty (smooth only)
  double lipschitz = 0.0;
  double modulus = 0.0;

  Vec operator()(const Vec& z, double gamma) const { return prox(z, gamma); }

  /// Subgradient witness (z - y)/gamma for y = prox(z, gamma).
  static Vec subgrad_witness(const Vec& z, double gamma, const Vec& y) {
    return (z - y) / gamma;
  }
};

/// Soft thresholding: componentwise sign(z_i) * max(|z_i| - gamma*lambda, 0).
inline Vec prox_l1(const Vec& z, double gamma, double lambda) {
  require_finite(z, "prox_l1 input");
  const double t = gamma * lambda;
  Vec y(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double a = std::abs(z[i]) - t;
    y[i] = a > 0 ? (z[i] > 0 ? a : -a) : 0.0;
  }
  return y;
}

inline ProxFunction make_l1(double lambda) {
  ProxFunction p;
  p.prox = [lambda](const Vec& z, double gamma) {
    return prox_l1(z, gamma, lambda);
  };
  p.value = [lambda](const Vec& x) { return lambda * x.lpNorm<1>(); };
  p.modulus = 0.0;
  return p;
}

/// The zero function; its prox is the identity.
inline ProxFunction make_zero() {
  ProxFunction p;
  p.prox = [](const Vec& z, double) { return z; };
  p.value = [](const Vec&) { return 0.0; };
  p.modulus = 0.0;
  return p;
}

/// g(x) = ||A x - b||^2 + (mu/2) ||x||^2. The prox solves
/// (2 A^T A + (mu + 1/gamma) I) x = 2 A^T b + z/gamma; a one-time
/// eigendecomposition of 2 A^T A makes each new gamma an O(d^2) solve.
class RidgeLeastSquares {
 public:
  RidgeLeastSquares(DenseMatrix A, Vec b, double mu)
      : A_(std::move(A)), b_(std::move(b)), mu_(mu) {
    if (A_.rows() != b_.size()) {
      throw std::invalid_argument("RidgeLeastSquares: A rows != b size");
    }
    if (mu_ <= 0) {
      throw std::invalid_argument("RidgeLeastSquares: mu must be positive");
    }
    const DenseMatrix H = 2.0 * A_.transpose() * A_;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(H);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("RidgeLeastSquares: eigendecomposition failed");
    }
    Q_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
    Atb2_ = 2.0 * A_.transpose() * b_;
  }

  double value(const Vec& x) const {
    return (A_ * x - b_).squaredNorm() + 0.5 * mu_ * x.squaredNorm();
  }

  Vec gradient(const Vec& x) const {
    return 2.0 * A_.transpose() * (A_ * x - b_) + mu_ * x;
  }

  Vec prox(const Vec& z, double gamma) const {
    require_finite(z, "ridge prox input");
    if (gamma <= 0) {
      throw std::invalid_argument("ridge prox: gamma must be positive");
    }
    const double c = mu_ + 1.0 / gamma;
    const Vec rhs = Atb2_ + z / gamma;
    const Vec w = Q_.transpose() * rhs;
    Vec y(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      y[i] = w[i] / (lambda_[i] + c);  // lambda_i >= 0, c > 0
    }
    return Q_ * y;
  }

  /// Smoothness constant 2 sigma_max(A)^2 + mu from the cached spectrum.
  double smoothness() const { return lambda_.maxCoeff() + mu_; }

  double mu() const { return mu_; }
  const DenseMatrix& A() const { return A_; }
  const Vec& b() const { return b_; }

 private:
  DenseMatrix A_;
  Vec b_;
  double mu_;
  DenseMatrix Q_;
  Vec lambda_;
  Vec Atb2_;
};

inline Vec prox_ridge_ls(const Vec& z, double gamma, const DenseMatrix& A,
                         const Vec& b, double mu) {
  return RidgeLeastSquares(A, b, mu).prox(z, gamma);
}

inline ProxFunction make_ridge_ls(DenseMatrix A, Vec b, double mu) {
  auto ridge = std::make_shared<RidgeLeastSquares>(std::move(A), std::move(b), mu);
  ProxFunction p;
  p.prox = [ridge](const Vec& z, double gamma) { return ridge->prox(z, gamma); };
  p.value = [ridge](const Vec& x) { return ridge->value(x); };
  p.grad = [ridge](const Vec& x) { return ridge->gradient(x); };
  p.lipschitz = ridge->smoothness();
  p.modulus = mu;
  return p;
}

/// g(x) = (mu/2) ||x||^2, prox = z / (1 + gamma mu).
inline ProxFunction make_quadratic(double mu) {
  ProxFunction p;
  p.prox = [mu](const Vec& z, double gamma) {
    return Vec(z / (1.0 + gamma * mu));
  };
  p.value = [mu](const Vec& x) { return 0.5 * mu * x.squaredNorm(); };
  p.grad = [mu](const Vec& x) { return Vec(mu * x); };
  p.lipschitz = mu;
  p.modulus = mu;
  return p;
}

}  // namespace fdrlab
