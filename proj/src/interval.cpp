#include "drcbf/interval.hpp"

#include <numbers>

namespace drcbf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Is there an integer k with lo <= k*period + phase <= hi?
bool crosses(double lo, double hi, double period, double phase) {
  const double k = std::ceil((lo - phase) / period);
  return k * period + phase <= hi;
}

}  // namespace

Interval cos(const Interval& t) {
  if (t.is_point()) return {std::cos(t.lo)};
  if (t.width() >= kTwoPi) return {-1.0, 1.0};
  double lo = std::cos(t.lo), hi = std::cos(t.hi);
  if (lo > hi) std::swap(lo, hi);
  if (crosses(t.lo, t.hi, kTwoPi, 0.0)) hi = 1.0;              // 2k*pi inside
  if (crosses(t.lo, t.hi, kTwoPi, std::numbers::pi)) lo = -1.0;  // (2k+1)*pi inside
  return {lo, hi};
}

Interval sin(const Interval& t) {
  if (t.is_point()) return {std::sin(t.lo)};
  if (t.width() >= kTwoPi) return {-1.0, 1.0};
  double lo = std::sin(t.lo), hi = std::sin(t.hi);
  if (lo > hi) std::swap(lo, hi);
  if (crosses(t.lo, t.hi, kTwoPi, 0.5 * std::numbers::pi)) hi = 1.0;
  if (crosses(t.lo, t.hi, kTwoPi, -0.5 * std::numbers::pi)) lo = -1.0;
  return {lo, hi};
}

}  // namespace drcbf
