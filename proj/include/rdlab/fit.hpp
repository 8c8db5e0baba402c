#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "rdlab/error.hpp"

namespace rdlab {

struct RateFit {
  double rate = 0.0;  // K in value ~ exp(intercept - K t)
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
  double t_first = 0.0;
  double t_last = 0.0;
};

inline constexpr double kFitFloor = 1e-14;
inline constexpr double kFitTailFraction = 1e-1;

/// Least-squares line through (t, ln value) on the decaying tail, i.e. the
/// points with 1e-14 < value < 0.1 * value(t0). Series that never drop below
/// a tenth of their first value (constant or slowly varying data) are fitted
/// on every point above 1e-14 instead.
inline RateFit fit_rate(std::span<const std::pair<double, double>> series) {
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i].first > series[i - 1].first)) {
      throw InvalidParameter("fit_rate: times must be strictly increasing");
    }
  }
  if (series.empty()) throw DomainError("fit_rate: too few qualifying points (0)");

  const double v0 = series.front().second;
  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, v] : series) {
    if (v > kFitFloor && v < kFitTailFraction * v0) pts.emplace_back(t, std::log(v));
  }
  if (pts.size() < 3) {
    pts.clear();
    for (const auto& [t, v] : series) {
      if (v > kFitFloor) pts.emplace_back(t, std::log(v));
    }
  }
  if (pts.size() < 3) {
    throw DomainError("fit_rate: too few qualifying points (" + std::to_string(pts.size()) + ")");
  }

  // Shift by the first point so that exactly constant data has exactly zero slope.
  const double t_ref = pts.front().first, y_ref = pts.front().second;
  const double n = static_cast<double>(pts.size());
  double st = 0.0, sy = 0.0;
  for (const auto& [t, y] : pts) {
    st += t - t_ref;
    sy += y - y_ref;
  }
  const double t_mean = st / n, y_mean = sy / n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (const auto& [t, y] : pts) {
    const double dt = t - t_ref - t_mean, dy = y - y_ref - y_mean;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  RateFit fit;
  const double slope = sty / stt;
  fit.rate = -slope;
  fit.intercept = (y_ref + y_mean) - slope * (t_ref + t_mean);
  double ss_res = 0.0;
  for (const auto& [t, y] : pts) {
    const double r = (y - y_ref - y_mean) - slope * (t - t_ref - t_mean);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.n_points = pts.size();
  fit.t_first = pts.front().first;
  fit.t_last = pts.back().first;
  return fit;
}

inline RateFit fit_rate(const std::vector<std::pair<double, double>>& series) {
  return fit_rate(std::span<const std::pair<double, double>>(series));
}

}  // namespace rdlab
