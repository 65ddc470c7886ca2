// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <limits>

#include "lrtf/tensor.hpp"

namespace lrtf {

/// Masked errors against the noisy input (e1 = L1, e2 = squared L2) and full
/// errors against the ground truth (e3 = L1, e4 = squared L2).
struct EMetrics {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double e4 = 0.0;
};

struct MetricsReport {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double e4 = 0.0;
  double psnr = 0.0;
  double rse = 0.0;
};

/// E1/E2 use the binary observation mask against the noisy input; E3/E4 are
/// unmasked against the ground truth.
[[nodiscard]] inline EMetrics compute_e_metrics(const DenseTensor& x_no,
                                                const DenseTensor& x_gt,
                                                const DenseTensor& x_rec,
                                                const ObservationMask& mask) {
  detail::check(x_no.same_dims(x_gt) && x_no.same_dims(x_rec),
                "compute_e_metrics: dims mismatch");
  detail::check(x_no.dims() == mask.dims(), "compute_e_metrics: mask dims mismatch");
  EMetrics out;
  for (std::size_t f = 0; f < x_no.size(); ++f) {
    if (mask.observed(f)) {
      const double d = x_no[f] - x_rec[f];
      out.e1 += std::abs(d);
      out.e2 += d * d;
    }
    const double g = x_gt[f] - x_rec[f];
    out.e3 += std::abs(g);
    out.e4 += g * g;
  }
  return out;
}

/// Peak signal-to-noise ratio in dB; returns the largest representable value
/// when the reconstruction is exact.
[[nodiscard]] inline double psnr(const DenseTensor& gt, const DenseTensor& rec,
                                 double peak) {
  detail::check(gt.same_dims(rec), "psnr: dims mismatch");
  detail::check(peak > 0.0, "psnr: peak must be positive");
  double mse = 0.0;
  for (std::size_t f = 0; f < gt.size(); ++f) {
    const double d = gt[f] - rec[f];
    mse += d * d;
  }
  mse /= static_cast<double>(gt.size());
  if (mse == 0.0) return std::numeric_limits<double>::max();
  return 10.0 * std::log10(peak * peak / mse);
}

/// Relative standard error ||gt - rec||_F / ||gt||_F.
[[nodiscard]] inline double rse(const DenseTensor& gt, const DenseTensor& rec) {
  detail::check(gt.same_dims(rec), "rse: dims mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t f = 0; f < gt.size(); ++f) {
    const double d = gt[f] - rec[f];
    num += d * d;
    den += gt[f] * gt[f];
  }
  detail::check(den > 0.0, "rse: ground truth has zero norm");
  return std::sqrt(num / den);
}

}  // namespace lrtf
