#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdlab/error.hpp"

namespace rdlab {

/// Uniform cell grid on [0, 1].
class Grid1D {
 public:
  explicit Grid1D(std::size_t n_cells) : n_(n_cells) {
    if (n_cells < 2) throw InvalidParameter("n_cells must be >= 2");
    dx_ = 1.0 / static_cast<double>(n_cells);
  }

  std::size_t n_cells() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }

  double center(std::size_t i) const noexcept {
    return (static_cast<double>(i) + 0.5) * dx_;
  }
  double left_face(std::size_t i) const noexcept { return static_cast<double>(i) * dx_; }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  std::size_t n_;
  double dx_;
};

/// Cell averages of one scalar quantity.
class Field {
 public:
  Field() = default;
  explicit Field(std::size_t n, double value = 0.0) : values_(n, value) {}
  explicit Field(std::vector<double> values) : values_(std::move(values)) {}
  Field(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::vector<double> values_;
};

/// Midpoint samples of f at the cell centers.
template <typename F>
Field sample_centers(const Grid1D& g, F&& f) {
  Field out(g.n_cells());
  for (std::size_t i = 0; i < g.n_cells(); ++i) out[i] = f(g.center(i));
  return out;
}

namespace detail {
inline void require_match(const Grid1D& g, const Field& f) {
  if (f.size() != g.n_cells()) {
    throw InvalidParameter("field has " + std::to_string(f.size()) +
                           " cells, grid has " + std::to_string(g.n_cells()));
  }
}
}  // namespace detail

/// Midpoint quadrature, dx * sum f[i].
inline double integrate(const Grid1D& g, const Field& f) {
  detail::require_match(g, f);
  double sum = 0.0;
  for (double x : f) sum += x;
  return g.dx() * sum;
}

/// Three-point Laplacian with zero flux through both boundary faces.
inline Field laplacian_neumann(const Grid1D& g, const Field& f) {
  detail::require_match(g, f);
  const std::size_t n = g.n_cells();
  const double inv_dx = 1.0 / g.dx();
  Field out(n);
  double flux_left = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double flux_right = (i + 1 < n) ? (f[i + 1] - f[i]) * inv_dx : 0.0;
    out[i] = (flux_right - flux_left) * inv_dx;
    flux_left = flux_right;
  }
  return out;
}

/// d * int |grad f|^2 / f, evaluated as 4 d sum_faces (sqrt f[i+1] - sqrt f[i])^2 / dx.
/// Finite wherever f >= 0, including cells at zero.
inline double fisher_information(const Grid1D& g, const Field& f, double d) {
  detail::require_match(g, f);
  for (double x : f) {
    if (!(x >= 0.0)) throw InvalidParameter("fisher_information: negative concentration");
  }
  double sum = 0.0;
  double prev = std::sqrt(f[0]);
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double cur = std::sqrt(f[i]);
    const double diff = cur - prev;
    sum += diff * diff;
    prev = cur;
  }
  return 4.0 * d * sum / g.dx();
}

}  // namespace rdlab
