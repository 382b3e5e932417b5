#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdrlab {

using Vec = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

inline void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) {
    throw std::runtime_error(std::string("non-finite values in ") + what);
  }
}

inline void require_same_dim(const Vec& a, const Vec& b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string("dimension mismatch in ") + what);
  }
}

inline double dot(const Vec& a, const Vec& b) {
  require_same_dim(a, b, "dot");
  return a.dot(b);
}

/// Solves M x = rhs for symmetric positive definite M via Cholesky.
inline Vec solve_spd(const DenseMatrix& M, const Vec& rhs) {
  if (M.rows() != M.cols() || M.rows() != rhs.size()) {
    throw std::invalid_argument("solve_spd: inconsistent dimensions");
  }
  Eigen::LLT<DenseMatrix> llt(M);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("solve_spd: matrix is not positive definite");
  }
  Vec x = llt.solve(rhs);
  require_finite(x, "solve_spd result");
  return x;
}

/// A set of pairwise-orthonormal columns in an ambient space.
/// Orthonormality is enforced at construction to 1e-12.
class OrthonormalFrame {
 public:
  explicit OrthonormalFrame(DenseMatrix columns) : cols_(std::move(columns)) {
    const DenseMatrix gram = cols_.transpose() * cols_;
    const double err =
        (gram - DenseMatrix::Identity(cols_.cols(), cols_.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (err > 1e-12) {
      throw std::invalid_argument("OrthonormalFrame: columns not orthonormal");
    }
  }

  static OrthonormalFrame standard_basis(Eigen::Index dim) {
    return OrthonormalFrame(DenseMatrix::Identity(dim, dim));
  }

  Eigen::Index ambient_dim() const { return cols_.rows(); }
  Eigen::Index count() const { return cols_.cols(); }
  Vec column(Eigen::Index i) const { return cols_.col(i); }
  const DenseMatrix& matrix() const { return cols_; }

  /// Coordinates of v in the frame, i.e. columns^T v.
  Vec coordinates(const Vec& v) const { return cols_.transpose() * v; }

  /// Reconstructs a vector from frame coordinates.
  Vec from_coordinates(const Vec& c) const { return cols_ * c; }

 private:
  DenseMatrix cols_;
};

/// Extends `frame` by `count` further orthonormal vectors, obtained by
/// Gram-Schmidt (with one re-orthogonalization pass) applied to candidate
/// directions. Candidates default to the standard basis; extra random
/// candidates can be appended by the caller through `candidates`.
inline std::vector<Vec> orthonormal_complement_basis(
    const OrthonormalFrame& frame, Eigen::Index count,
    const std::vector<Vec>& candidates = {}) {
  const Eigen::Index d = frame.ambient_dim();
  if (count > d - frame.count()) {
    throw std::invalid_argument(
        "orthonormal_complement_basis: insufficient ambient dimension");
  }
  std::vector<Vec> basis;
  basis.reserve(static_cast<std::size_t>(frame.count() + count));
  for (Eigen::Index i = 0; i < frame.count(); ++i) {
    basis.push_back(frame.column(i));
  }
  std::vector<Vec> result;
  auto try_add = [&](Vec v) {
    if (static_cast<Eigen::Index>(result.size()) >= count) return;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& b : basis) v -= b.dot(v) * b;
    }
    const double n = v.norm();
    if (n > 1e-8) {
      v /= n;
      basis.push_back(v);
      result.push_back(v);
    }
  };
  for (const Vec& c : candidates) try_add(c);
  for (Eigen::Index i = 0; i < d; ++i) try_add(Vec::Unit(d, i));
  if (static_cast<Eigen::Index>(result.size()) < count) {
    throw std::runtime_error(
        "orthonormal_complement_basis: could not complete the frame");
  }
  return result;
}

}  // namespace fdrlab
