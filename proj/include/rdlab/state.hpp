#pragma once

#include "rdlab/grid.hpp"

namespace rdlab {

/// Concentrations of the three species at time t on a shared grid.
struct State {
  double t = 0.0;
  Field u;
  Field v;
  Field w;

  static State homogeneous(const Grid1D& g, double u0, double v0, double w0, double t = 0.0) {
    return {t, Field(g.n_cells(), u0), Field(g.n_cells(), v0), Field(g.n_cells(), w0)};
  }

  std::size_t n_cells() const noexcept { return u.size(); }

  void require_grid(const Grid1D& g) const {
    if (u.size() != g.n_cells() || v.size() != g.n_cells() || w.size() != g.n_cells()) {
      throw InvalidParameter("state does not match grid");
    }
  }

  void require_nonnegative() const {
    for (const Field* f : {&u, &v, &w}) {
      for (double x : *f) {
        if (!(x >= 0.0)) throw InvalidParameter("state has a negative or NaN concentration");
      }
    }
  }

  double min_concentration() const {
    double m = u.size() ? u[0] : 0.0;
    for (const Field* f : {&u, &v, &w}) {
      for (double x : *f) m = x < m ? x : m;
    }
    return m;
  }
};

}  // namespace rdlab
