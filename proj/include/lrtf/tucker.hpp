// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "lrtf/numeric.hpp"
#include "lrtf/tensor.hpp"

namespace lrtf {

/// Tucker model: core tensor of dims (r1..rN) plus one In x rn mode matrix
/// per mode.
struct TuckerModel {
  DenseTensor core;
  std::vector<Matrix> modes;

  [[nodiscard]] int order() const { return core.order(); }
};

struct TuckerSolveOptions {
  std::size_t max_sweeps = 50;
  double tol = 1e-8;  // relative change of the weighted objective
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_tucker_shapes(const TuckerModel& m) {
  check(m.modes.size() == static_cast<std::size_t>(m.core.order()),
        "Tucker model needs one mode matrix per core mode");
  for (std::size_t n = 0; n < m.modes.size(); ++n) {
    check(m.modes[n].rows() >= 1, "Tucker mode matrices must have positive rows");
    check(m.modes[n].cols() == m.core.dims()[n],
          "Tucker mode matrix columns must match the core dimension");
  }
}

inline void check_tucker_against(const TuckerModel& m, const DenseTensor& x) {
  check_tucker_shapes(m);
  check(x.order() == m.order(), "Tucker model order must match the tensor order");
  for (std::size_t n = 0; n < m.modes.size(); ++n)
    check(m.modes[n].rows() == x.dims()[n],
          "Tucker mode matrix rows must match the tensor dims");
}

// Outer product of the selected mode-matrix columns, written into out in the
// tensor's flat layout. Expands in place, later modes appended as faster
// indices; blocks are filled from the highest index down so reads stay ahead
// of writes.
inline void selected_columns_outer(const std::vector<Matrix>& modes,
                                   std::span<const std::size_t> cols,
                                   std::vector<double>& out) {
  out[0] = 1.0;
  std::size_t cur = 1;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const Matrix& mode = modes[m];
    const std::size_t rows = mode.rows();
    const std::size_t col = cols[m];
    for (std::size_t a = cur; a-- > 0;) {
      const double base = out[a];
      for (std::size_t b = rows; b-- > 0;) out[a * rows + b] = base * mode(b, col);
    }
    cur *= rows;
  }
}

}  // namespace detail

/// L = G x1 U1 x2 U2 ... xN UN.
[[nodiscard]] inline DenseTensor tucker_reconstruct(const TuckerModel& m) {
  detail::check_tucker_shapes(m);
  DenseTensor out = m.core;
  for (int n = 1; n <= m.order(); ++n)
    out = mode_n_product(out, m.modes[static_cast<std::size_t>(n) - 1], ModeIndex(n));
  return out;
}

/// Core and mode matrices with i.i.d. standard normal entries.
[[nodiscard]] inline TuckerModel tucker_init(const std::vector<std::size_t>& dims,
                                             const std::vector<std::size_t>& ranks,
                                             std::uint64_t seed) {
  detail::check(!dims.empty() && dims.size() == ranks.size(),
                "tucker_init: dims and ranks must have equal, positive length");
  for (std::size_t n = 0; n < dims.size(); ++n)
    detail::check(ranks[n] >= 1 && ranks[n] <= dims[n],
                  "tucker_init: ranks must satisfy 1 <= rn <= In");
  Rng rng(seed);
  TuckerModel m{DenseTensor(ranks), {}};
  for (double& v : m.core.data()) v = rng.standard_normal();
  m.modes.reserve(dims.size());
  for (std::size_t n = 0; n < dims.size(); ++n) {
    Matrix mode(dims[n], ranks[n]);
    for (double& v : mode.data()) v = rng.standard_normal();
    m.modes.push_back(std::move(mode));
  }
  return m;
}

/// One coordinate-descent pass over every entry of mode matrix n.
///
/// D is the core contracted with all other mode matrices; along the mode-n
/// unfolding the model reads X_(n) ~ H D_(n). Entry (i,k) of H is the exact
/// scalar weighted least-squares minimizer against the rank-1-deflated
/// residual row, with weights from row i of W_(n). The unfolded residual is
/// maintained incrementally across entries. Scan order is row-major (i outer,
/// k inner). Only mode matrix n changes.
///
/// When objective_trace is given, the full weighted objective is appended
/// after every scalar update (test instrumentation).
[[nodiscard]] inline TuckerModel tucker_update_mode_matrix(
    const DenseTensor& x, const DenseTensor& w, const TuckerModel& m, ModeIndex n,
    std::vector<double>* objective_trace = nullptr) {
  detail::check_tucker_against(m, x);
  detail::check(x.same_dims(w), "tucker_update_mode_matrix: weight dims mismatch");
  detail::check(n.value() >= 1 && n.value() <= m.order(),
                "tucker_update_mode_matrix: mode out of range");
  const std::size_t n0 = static_cast<std::size_t>(n.value()) - 1;

  DenseTensor dtens = m.core;
  for (int mm = 1; mm <= m.order(); ++mm) {
    if (mm == n.value()) continue;
    dtens = mode_n_product(dtens, m.modes[static_cast<std::size_t>(mm) - 1],
                           ModeIndex(mm));
  }
  const Matrix dmat = unfold(dtens, n);
  const Matrix xmat = unfold(x, n);
  const Matrix wmat = unfold(w, n);

  TuckerModel out = m;
  Matrix& h = out.modes[n0];
  const std::size_t rows = h.rows(), rank = h.cols(), cols = xmat.cols();

  // Residual R = X_(n) - H D_(n).
  Matrix resid = xmat;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < rank; ++k) {
      const double hv = h(i, k);
      if (hv == 0.0) continue;
      for (std::size_t p = 0; p < cols; ++p) resid(i, p) -= hv * dmat(k, p);
    }

  double obj = 0.0;
  if (objective_trace) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t p = 0; p < cols; ++p) {
        const double r = wmat(i, p) * resid(i, p);
        obj += r * r;
      }
  }

  std::vector<double> e(cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto wrow = wmat.row(i);
    for (std::size_t k = 0; k < rank; ++k) {
      const double h_old = h(i, k);
      const auto drow = dmat.row(k);
      for (std::size_t p = 0; p < cols; ++p) e[p] = resid(i, p) + h_old * drow[p];

      double row_before = 0.0;
      if (objective_trace) {
        for (std::size_t p = 0; p < cols; ++p) {
          const double r = wrow[p] * resid(i, p);
          row_before += r * r;
        }
      }

      const double h_new = scalar_wls(wrow, e, drow, h_old);
      h(i, k) = h_new;
      for (std::size_t p = 0; p < cols; ++p) resid(i, p) = e[p] - h_new * drow[p];

      if (objective_trace) {
        double row_after = 0.0;
        for (std::size_t p = 0; p < cols; ++p) {
          const double r = wrow[p] * resid(i, p);
          row_after += r * r;
        }
        obj += row_after - row_before;
        objective_trace->push_back(obj);
      }
    }
  }
  return out;
}

/// One coordinate-descent pass over every core entry, in lexicographic order.
///
/// For each entry, the design is the outer product of the selected mode-matrix
/// columns and the target is the residual with this entry's own term added
/// back; the update is the exact scalar weighted least-squares minimizer over
/// the vectorized tensors. The full residual is maintained incrementally.
[[nodiscard]] inline TuckerModel tucker_update_core(
    const DenseTensor& x, const DenseTensor& w, const TuckerModel& m,
    std::vector<double>* objective_trace = nullptr) {
  detail::check_tucker_against(m, x);
  detail::check(x.same_dims(w), "tucker_update_core: weight dims mismatch");

  TuckerModel out = m;
  const std::size_t total = x.size();
  const DenseTensor recon = tucker_reconstruct(out);
  std::vector<double> resid(total);
  for (std::size_t f = 0; f < total; ++f) resid[f] = x[f] - recon[f];

  const std::size_t order = static_cast<std::size_t>(out.order());
  const auto& rdims = out.core.dims();
  std::vector<std::size_t> kidx(order, 0);
  std::vector<double> u(total);
  std::vector<double> e(total);

  for (std::size_t flat = 0; flat < out.core.size(); ++flat) {
    detail::selected_columns_outer(out.modes, kidx, u);
    const double g_old = out.core[flat];
    for (std::size_t f = 0; f < total; ++f) e[f] = resid[f] + g_old * u[f];
    const double g_new = scalar_wls(w.data(), e, u, g_old);
    out.core[flat] = g_new;
    for (std::size_t f = 0; f < total; ++f) resid[f] = e[f] - g_new * u[f];

    if (objective_trace) {
      double obj = 0.0;
      for (std::size_t f = 0; f < total; ++f) {
        const double r = w[f] * resid[f];
        obj += r * r;
      }
      objective_trace->push_back(obj);
    }

    for (std::size_t m2 = order; m2-- > 0;) {  // odometer, last index fastest
      if (++kidx[m2] < rdims[m2]) break;
      kidx[m2] = 0;
    }
  }
  return out;
}

/// Weighted Tucker factorization, warm-started from init. Each sweep updates
/// every mode matrix in mode order 1..N and then the core, entry by entry,
/// until the relative decrease of the weighted objective drops below tol or
/// max_sweeps is reached.
[[nodiscard]] inline TuckerModel solve_gwlrtf_tucker(
    const DenseTensor& x, const DenseTensor& w, const TuckerModel& init,
    const TuckerSolveOptions& opts = {}) {
  detail::check_tucker_against(init, x);
  detail::check(x.same_dims(w), "solve_gwlrtf_tucker: weight dims mismatch");
  detail::check_nonnegative(w, "solve_gwlrtf_tucker");
  detail::check(opts.max_sweeps >= 1, "solve_gwlrtf_tucker: max_sweeps must be positive");

  TuckerModel model = init;
  double obj_prev = weighted_objective(x, w, tucker_reconstruct(model));
  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    for (int n = 1; n <= model.order(); ++n)
      model = tucker_update_mode_matrix(x, w, model, ModeIndex(n));
    model = tucker_update_core(x, w, model);
    const double obj = weighted_objective(x, w, tucker_reconstruct(model));
    if (std::abs(obj_prev - obj) / std::max(obj_prev, 1e-30) < opts.tol) break;
    obj_prev = obj;
  }
  return model;
}

[[nodiscard]] inline TuckerModel solve_gwlrtf_tucker(
    const DenseTensor& x, const DenseTensor& w, const std::vector<std::size_t>& ranks,
    const TuckerSolveOptions& opts = {}) {
  return solve_gwlrtf_tucker(x, w, tucker_init(x.dims(), ranks, opts.seed), opts);
}

}  // namespace lrtf
