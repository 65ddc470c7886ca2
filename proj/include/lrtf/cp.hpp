// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

#include "lrtf/numeric.hpp"
#include "lrtf/tensor.hpp"

namespace lrtf {

/// Rank-r CP factors of a 3-order tensor: L = sum_d u_:d o v_:d o t_:d.
struct FactorSetCP {
  Matrix u;  // I x r
  Matrix v;  // J x r
  Matrix t;  // K x r

  [[nodiscard]] std::size_t rank() const { return u.cols(); }
};

struct CpSolveOptions {
  std::size_t max_sweeps = 50;
  double tol = 1e-8;  // relative change of the weighted objective
  std::uint64_t seed = 0;
  LstsqOptions lstsq;
};

namespace detail {

inline void check_cp_shapes(const FactorSetCP& f) {
  check(f.u.cols() >= 1 && f.u.cols() == f.v.cols() && f.u.cols() == f.t.cols(),
        "CP factors must share a positive rank");
  check(f.u.rows() >= 1 && f.v.rows() >= 1 && f.t.rows() >= 1,
        "CP factors must have positive row counts");
}

inline void check_cp_against(const FactorSetCP& f, const DenseTensor& x) {
  check(x.order() == 3, "CP factorization requires a 3-order tensor");
  check_cp_shapes(f);
  check(f.u.rows() == x.dims()[0] && f.v.rows() == x.dims()[1] &&
            f.t.rows() == x.dims()[2],
        "CP factor row counts must match the tensor dims");
}

}  // namespace detail

/// L = sum_d u_:d o v_:d o t_:d.
[[nodiscard]] inline DenseTensor cp_reconstruct(const FactorSetCP& f) {
  detail::check_cp_shapes(f);
  const std::size_t I = f.u.rows(), J = f.v.rows(), K = f.t.rows(), r = f.rank();
  DenseTensor out({I, J, K});
  for (std::size_t d = 0; d < r; ++d) {
    for (std::size_t i = 0; i < I; ++i) {
      const double ui = f.u(i, d);
      if (ui == 0.0) continue;
      for (std::size_t j = 0; j < J; ++j) {
        const double uv = ui * f.v(j, d);
        for (std::size_t k = 0; k < K; ++k) out(i, j, k) += uv * f.t(k, d);
      }
    }
  }
  return out;
}

/// Factors with i.i.d. standard normal entries from the seeded generator.
[[nodiscard]] inline FactorSetCP cp_init(const std::array<std::size_t, 3>& dims,
                                         std::size_t rank, std::uint64_t seed) {
  detail::check(rank >= 1, "cp_init: rank must be positive");
  Rng rng(seed);
  FactorSetCP f{Matrix(dims[0], rank), Matrix(dims[1], rank), Matrix(dims[2], rank)};
  for (double& v : f.u.data()) v = rng.standard_normal();
  for (double& v : f.v.data()) v = rng.standard_normal();
  for (double& v : f.t.data()) v = rng.standard_normal();
  return f;
}

/// One alternating-least-squares block update of a single mode matrix.
///
/// xw must be the precomputed weighted data W (x) X. For mode 3 every row k of
/// T solves the stacked system whose target is the vectorized weighted frontal
/// slice of X and whose design columns are the vectorized weighted rank-1
/// frontal slices built from the current u_:d, v_:d. Modes 2 and 1 do the same
/// with lateral and horizontal slices. Only the selected factor changes.
[[nodiscard]] inline FactorSetCP cp_update_mode(const DenseTensor& xw,
                                                const DenseTensor& w,
                                                const FactorSetCP& f, ModeIndex mode,
                                                const LstsqOptions& lstsq = {}) {
  detail::check_cp_against(f, xw);
  detail::check(xw.same_dims(w), "cp_update_mode: weight dims mismatch");
  detail::check(mode.value() >= 1 && mode.value() <= 3,
                "cp_update_mode: mode out of range");
  const std::size_t I = f.u.rows(), J = f.v.rows(), K = f.t.rows(), r = f.rank();

  FactorSetCP out = f;
  switch (mode.value()) {
    case 3: {
      Matrix design(I * J, r);
      std::vector<double> target(I * J);
      for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t j = 0; j < J; ++j) {
          for (std::size_t i = 0; i < I; ++i) {
            const std::size_t idx = j * I + i;  // column-stacking of the I x J slice
            target[idx] = xw(i, j, k);
            const double wv = w(i, j, k);
            for (std::size_t d = 0; d < r; ++d)
              design(idx, d) = wv * f.u(i, d) * f.v(j, d);
          }
        }
        const auto row = lstsq_pinv(design, target, lstsq);
        for (std::size_t d = 0; d < r; ++d) out.t(k, d) = row[d];
      }
      break;
    }
    case 2: {
      Matrix design(I * K, r);
      std::vector<double> target(I * K);
      for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t k = 0; k < K; ++k) {
          for (std::size_t i = 0; i < I; ++i) {
            const std::size_t idx = k * I + i;  // column-stacking of the I x K slice
            target[idx] = xw(i, j, k);
            const double wv = w(i, j, k);
            for (std::size_t d = 0; d < r; ++d)
              design(idx, d) = wv * f.t(k, d) * f.u(i, d);
          }
        }
        const auto row = lstsq_pinv(design, target, lstsq);
        for (std::size_t d = 0; d < r; ++d) out.v(j, d) = row[d];
      }
      break;
    }
    case 1: {
      Matrix design(J * K, r);
      std::vector<double> target(J * K);
      for (std::size_t i = 0; i < I; ++i) {
        for (std::size_t k = 0; k < K; ++k) {
          for (std::size_t j = 0; j < J; ++j) {
            const std::size_t idx = k * J + j;  // column-stacking of the J x K slice
            target[idx] = xw(i, j, k);
            const double wv = w(i, j, k);
            for (std::size_t d = 0; d < r; ++d)
              design(idx, d) = wv * f.v(j, d) * f.t(k, d);
          }
        }
        const auto row = lstsq_pinv(design, target, lstsq);
        for (std::size_t d = 0; d < r; ++d) out.u(i, d) = row[d];
      }
      break;
    }
  }
  return out;
}

/// Weighted CP factorization of a 3-order tensor, warm-started from init.
/// Sweeps update T, then V, then U, each block using the newest other factors,
/// until the relative decrease of the weighted objective drops below tol or
/// max_sweeps is reached.
[[nodiscard]] inline FactorSetCP solve_gwlrtf_cp(const DenseTensor& x,
                                                 const DenseTensor& w,
                                                 const FactorSetCP& init,
                                                 const CpSolveOptions& opts = {}) {
  detail::check_cp_against(init, x);
  detail::check(x.same_dims(w), "solve_gwlrtf_cp: weight dims mismatch");
  detail::check_nonnegative(w, "solve_gwlrtf_cp");
  detail::check(opts.max_sweeps >= 1, "solve_gwlrtf_cp: max_sweeps must be positive");

  const DenseTensor xw = hadamard(w, x);  // W is fixed for the whole solve
  FactorSetCP f = init;
  double obj_prev = weighted_objective(x, w, cp_reconstruct(f));
  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    f = cp_update_mode(xw, w, f, ModeIndex(3), opts.lstsq);
    f = cp_update_mode(xw, w, f, ModeIndex(2), opts.lstsq);
    f = cp_update_mode(xw, w, f, ModeIndex(1), opts.lstsq);
    const double obj = weighted_objective(x, w, cp_reconstruct(f));
    if (std::abs(obj_prev - obj) / std::max(obj_prev, 1e-30) < opts.tol) break;
    obj_prev = obj;
  }
  return f;
}

[[nodiscard]] inline FactorSetCP solve_gwlrtf_cp(const DenseTensor& x,
                                                 const DenseTensor& w,
                                                 std::size_t rank,
                                                 const CpSolveOptions& opts = {}) {
  detail::check(x.order() == 3, "solve_gwlrtf_cp: tensor must be 3-order");
  const auto& d = x.dims();
  return solve_gwlrtf_cp(x, w, cp_init({d[0], d[1], d[2]}, rank, opts.seed), opts);
}

}  // namespace lrtf
