#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "drcbf/types.hpp"

namespace drcbf {

/// Closed scalar interval [lo, hi]. Natural interval extensions built from
/// these are inclusion-monotone, which the reach margins rely on.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double point) : lo(point), hi(point) {}
  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (lo > hi) throw std::invalid_argument("Interval: lo > hi");
  }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  double abs_upper() const { return std::max(std::abs(lo), std::abs(hi)); }
  bool is_point() const { return lo == hi; }
  bool contains(double x) const { return lo <= x && x <= hi; }

  Interval operator-() const { return {-hi, -lo}; }

  Interval& operator+=(const Interval& o) {
    lo += o.lo;
    hi += o.hi;
    return *this;
  }
};

inline Interval operator+(Interval a, const Interval& b) { return a += b; }
inline Interval operator-(const Interval& a, const Interval& b) {
  return {a.lo - b.hi, a.hi - b.lo};
}

inline Interval operator*(const Interval& a, const Interval& b) {
  // Point*point short-circuit keeps degenerate arithmetic bit-identical to
  // the scalar evaluation path.
  if (a.is_point() && b.is_point()) return {a.lo * b.lo};
  const double p1 = a.lo * b.lo, p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)),
          std::max(std::max(p1, p2), std::max(p3, p4))};
}

inline Interval operator*(double s, const Interval& a) {
  if (a.is_point()) return {s * a.lo};
  return s >= 0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo};
}

/// Exact range of x^2 over the interval.
inline Interval square(const Interval& a) {
  if (a.is_point()) return {a.lo * a.lo};
  const double m = a.abs_upper();
  const double lo = a.contains(0.0) ? 0.0 : std::min(a.lo * a.lo, a.hi * a.hi);
  return {lo, m * m};
}

inline Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

/// Exact range of cos over the interval: endpoint values plus +-1 whenever a
/// multiple of pi falls inside. Endpoint-only evaluation would be unsound for
/// intervals crossing an extremum.
Interval cos(const Interval& t);
Interval sin(const Interval& t);

/// Interval vector (state-box in reach computations).
using IBox = std::vector<Interval>;

inline IBox to_ibox(const Vec& v) {
  IBox b(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) b[i] = Interval(v[i]);
  return b;
}

inline IBox to_ibox(const BoxSet& box) {
  IBox b(box.dim());
  for (int i = 0; i < box.dim(); ++i) b[i] = Interval(box.lo[i], box.hi[i]);
  return b;
}

/// Vector offset by a box: x + [lo, hi] per component.
inline IBox offset_box(const Vec& x, const BoxSet& box) {
  if (x.size() != box.lo.size())
    throw std::invalid_argument("offset_box: dimension mismatch");
  IBox b(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    b[i] = Interval(x[i] + box.lo[i], x[i] + box.hi[i]);
  return b;
}

inline BoxSet to_boxset(const IBox& b) {
  Vec lo(b.size()), hi(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    lo[static_cast<Eigen::Index>(i)] = b[i].lo;
    hi[static_cast<Eigen::Index>(i)] = b[i].hi;
  }
  return BoxSet(lo, hi);
}

inline IBox operator+(const IBox& a, const IBox& b) {
  if (a.size() != b.size()) throw std::invalid_argument("IBox +: size mismatch");
  IBox out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline IBox scale(double s, const IBox& a) {
  IBox out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

inline IBox hull(const IBox& a, const IBox& b) {
  if (a.size() != b.size()) throw std::invalid_argument("IBox hull: size mismatch");
  IBox out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = hull(a[i], b[i]);
  return out;
}

inline bool contains(const IBox& b, const Vec& x, double tol = 0.0) {
  if (static_cast<Eigen::Index>(b.size()) != x.size()) return false;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    if (x[j] < b[i].lo - tol || x[j] > b[i].hi + tol) return false;
  }
  return true;
}

/// Upper bound of the l2 norm of an interval row vector.
inline double norm_upper(const IBox& b) {
  double s = 0.0;
  for (const auto& c : b) s += c.abs_upper() * c.abs_upper();
  return std::sqrt(s);
}

/// Interval matrix, row-major.
struct IMat {
  int rows = 0, cols = 0;
  std::vector<Interval> a;

  IMat() = default;
  IMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  Interval& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  const Interval& at(int r, int c) const {
    return a[static_cast<std::size_t>(r) * cols + c];
  }

  static IMat from(const Mat& m) {
    IMat out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int r = 0; r < out.rows; ++r)
      for (int c = 0; c < out.cols; ++c) out.at(r, c) = Interval(m(r, c));
    return out;
  }
};

/// Interval matrix * interval vector.
inline IBox mul(const IMat& m, const IBox& v) {
  if (static_cast<std::size_t>(m.cols) != v.size())
    throw std::invalid_argument("IMat mul: size mismatch");
  IBox out(static_cast<std::size_t>(m.rows), Interval(0.0));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) out[static_cast<std::size_t>(r)] += m.at(r, c) * v[static_cast<std::size_t>(c)];
  return out;
}

}  // namespace drcbf
