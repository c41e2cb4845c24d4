#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace drcbf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using RowVec = Eigen::RowVectorXd;

/// Axis-aligned box { u : lo <= u <= hi }, used for input sets, disturbance
/// sets, measurement-error sets and sampling domains.
struct BoxSet {
  Vec lo;
  Vec hi;

  BoxSet() = default;
  BoxSet(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size())
      throw std::invalid_argument("BoxSet: lo/hi dimension mismatch");
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (lo[i] > hi[i]) throw std::invalid_argument("BoxSet: lo > hi");
  }

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(const Vec& u, double tol = 0.0) const {
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (u[i] < lo[i] - tol || u[i] > hi[i] + tol) return false;
    return true;
  }

  bool contains_zero() const { return contains(Vec::Zero(lo.size())); }

  Vec clip(const Vec& u) const {
    return u.cwiseMax(lo).cwiseMin(hi);
  }

  Vec center() const { return 0.5 * (lo + hi); }
  Vec width() const { return hi - lo; }

  bool degenerate() const { return (hi - lo).maxCoeff() <= 0.0; }

  /// Largest l2 norm attained over the box (it is attained at a corner).
  double max_corner_norm() const {
    return lo.cwiseAbs().cwiseMax(hi.cwiseAbs()).norm();
  }

  /// All 2^n corners, lexicographic in (lo, hi) choice per component.
  std::vector<Vec> corners() const {
    const int n = dim();
    std::vector<Vec> out;
    out.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Vec c(n);
      for (int i = 0; i < n; ++i) c[i] = (mask >> i & 1) ? hi[i] : lo[i];
      out.push_back(std::move(c));
    }
    return out;
  }
};

}  // namespace drcbf
