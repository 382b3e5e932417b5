#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "fdrlab/core.hpp"

namespace fdrlab {

/// Projects p onto the segment [(0,0), endpoint] with endpoint >= 0
/// componentwise: clamp(<p,e>/||e||^2, 0, 1) * e. A degenerate endpoint
/// (0,0) projects everything to the origin.
inline Eigen::Vector2d project_segment2d(const Eigen::Vector2d& p,
                                         const Eigen::Vector2d& endpoint) {
  const double nn = endpoint.squaredNorm();
  if (nn == 0.0) return Eigen::Vector2d::Zero();
  const double s = std::clamp(p.dot(endpoint) / nn, 0.0, 1.0);
  return s * endpoint;
}

/// A Cartesian product of 2-D segments [(0,0),(a,b)], pinned coordinates,
/// and free coordinates. Coordinates not mentioned are free.
struct SegmentProductSet {
  struct Block {
    Eigen::Index i, j;  // coordinate pair
    double a, b;        // segment endpoint, a,b >= 0
  };
  struct Pin {
    Eigen::Index i;
    double value;
  };

  Eigen::Index dim = 0;
  std::vector<Block> blocks;
  std::vector<Pin> pinned;

  void validate() const {
    std::vector<char> seen(static_cast<std::size_t>(dim), 0);
    auto mark = [&](Eigen::Index i) {
      if (i < 0 || i >= dim) {
        throw std::invalid_argument("SegmentProductSet: index out of range");
      }
      if (seen[static_cast<std::size_t>(i)]++) {
        throw std::invalid_argument("SegmentProductSet: overlapping indices");
      }
    };
    for (const auto& b : blocks) {
      mark(b.i);
      mark(b.j);
      if (b.a < 0 || b.b < 0) {
        throw std::invalid_argument("SegmentProductSet: negative endpoint");
      }
    }
    for (const auto& p : pinned) mark(p.i);
  }
};

/// Blockwise Euclidean projection onto a SegmentProductSet. Free
/// coordinates pass through unchanged.
inline Vec project_segment_product(const Vec& y, const SegmentProductSet& S) {
  if (y.size() != S.dim) {
    throw std::invalid_argument("project_segment_product: dimension mismatch");
  }
  Vec out = y;
  for (const auto& blk : S.blocks) {
    const Eigen::Vector2d q = project_segment2d(
        Eigen::Vector2d(y[blk.i], y[blk.j]), Eigen::Vector2d(blk.a, blk.b));
    out[blk.i] = q[0];
    out[blk.j] = q[1];
  }
  for (const auto& pin : S.pinned) out[pin.i] = pin.value;
  return out;
}

}  // namespace fdrlab
