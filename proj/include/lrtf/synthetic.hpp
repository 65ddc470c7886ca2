// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "lrtf/cp.hpp"
#include "lrtf/numeric.hpp"
#include "lrtf/tensor.hpp"

namespace lrtf {

/// Noise recipe applied to the observed entries of a tensor.
///
/// gaussian adds N(0, variance) everywhere; sparse adds Uniform(lo, hi) to a
/// fraction of entries; mixture partitions the observed entries into a sparse
/// uniform part, a wide Gaussian part of the rest, and a narrow Gaussian
/// remainder. Second Gaussian parameters are variances throughout.
struct NoiseSpec {
  enum class Kind { gaussian, sparse, mixture };

  Kind kind = Kind::gaussian;
  double gaussian_variance = 0.1;

  double sparse_fraction = 0.2;
  double sparse_lo = -5.0;
  double sparse_hi = 5.0;

  double mixture_gaussian_fraction = 0.2;
  double mixture_gaussian_variance = 0.2;
  double mixture_residual_variance = 0.01;

  static NoiseSpec gaussian(double variance) {
    NoiseSpec s;
    s.kind = Kind::gaussian;
    s.gaussian_variance = variance;
    return s;
  }
  static NoiseSpec sparse(double fraction, double lo, double hi) {
    NoiseSpec s;
    s.kind = Kind::sparse;
    s.sparse_fraction = fraction;
    s.sparse_lo = lo;
    s.sparse_hi = hi;
    return s;
  }
  /// Default mixture: 20% uniform on [-5,5], 20% of the rest N(0, 0.2),
  /// remainder N(0, 0.01).
  static NoiseSpec mixture() {
    NoiseSpec s;
    s.kind = Kind::mixture;
    return s;
  }
  static NoiseSpec mixture(double sparse_fraction, double lo, double hi,
                           double gaussian_fraction, double gaussian_variance,
                           double residual_variance) {
    NoiseSpec s;
    s.kind = Kind::mixture;
    s.sparse_fraction = sparse_fraction;
    s.sparse_lo = lo;
    s.sparse_hi = hi;
    s.mixture_gaussian_fraction = gaussian_fraction;
    s.mixture_gaussian_variance = gaussian_variance;
    s.mixture_residual_variance = residual_variance;
    return s;
  }

  void validate() const {
    detail::check(gaussian_variance >= 0.0, "noise: variance must be nonnegative");
    detail::check(sparse_fraction >= 0.0 && sparse_fraction <= 1.0,
                  "noise: fraction must lie in [0,1]");
    detail::check(sparse_lo <= sparse_hi, "noise: range must be ordered");
    detail::check(mixture_gaussian_fraction >= 0.0 && mixture_gaussian_fraction <= 1.0,
                  "noise: fraction must lie in [0,1]");
    detail::check(mixture_gaussian_variance >= 0.0 && mixture_residual_variance >= 0.0,
                  "noise: variance must be nonnegative");
  }
};

/// Ground-truth low-rank tensor with i.i.d. standard normal CP factors.
[[nodiscard]] inline std::pair<DenseTensor, FactorSetCP> gen_synthetic_cp(
    const std::array<std::size_t, 3>& dims, std::size_t rank, std::uint64_t seed) {
  FactorSetCP factors = cp_init(dims, rank, seed);
  DenseTensor x = cp_reconstruct(factors);
  return {std::move(x), std::move(factors)};
}

/// Mask with exactly round(rate * total) unobserved entries, chosen uniformly
/// without replacement; deterministic per seed.
[[nodiscard]] inline ObservationMask apply_missing(const std::vector<std::size_t>& dims,
                                                   double rate, std::uint64_t seed) {
  detail::check(rate >= 0.0 && rate < 1.0, "apply_missing: rate must lie in [0,1)");
  const std::size_t total = detail::checked_product(dims);
  const std::size_t missing =
      static_cast<std::size_t>(std::llround(rate * static_cast<double>(total)));

  std::vector<std::size_t> order(total);
  for (std::size_t f = 0; f < total; ++f) order[f] = f;
  Rng rng(seed);
  for (std::size_t i = 0; i < missing; ++i) {  // partial Fisher-Yates
    const std::size_t j = i + rng.uniform_index(total - i);
    std::swap(order[i], order[j]);
  }
  ObservationMask mask(dims, true);
  for (std::size_t i = 0; i < missing; ++i) mask.set(order[i], false);
  return mask;
}

/// Adds noise to the observed entries only; deterministic per seed.
[[nodiscard]] inline DenseTensor add_noise(const DenseTensor& x,
                                           const ObservationMask& mask,
                                           const NoiseSpec& spec, std::uint64_t seed) {
  detail::check(x.dims() == mask.dims(), "add_noise: mask dims mismatch");
  spec.validate();

  DenseTensor out = x;
  Rng rng(seed);
  std::vector<std::size_t> observed = mask.observed_indices();
  const std::size_t m = observed.size();

  const auto shuffle_prefix = [&](std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + rng.uniform_index(m - i);
      std::swap(observed[i], observed[j]);
    }
  };

  switch (spec.kind) {
    case NoiseSpec::Kind::gaussian:
      for (std::size_t f : observed) out[f] += rng.normal(0.0, spec.gaussian_variance);
      break;
    case NoiseSpec::Kind::sparse: {
      const std::size_t n_sp = static_cast<std::size_t>(
          std::llround(spec.sparse_fraction * static_cast<double>(m)));
      shuffle_prefix(n_sp);
      for (std::size_t i = 0; i < n_sp; ++i)
        out[observed[i]] += rng.uniform(spec.sparse_lo, spec.sparse_hi);
      break;
    }
    case NoiseSpec::Kind::mixture: {
      const std::size_t n_sp = static_cast<std::size_t>(
          std::llround(spec.sparse_fraction * static_cast<double>(m)));
      const std::size_t n_g = static_cast<std::size_t>(std::llround(
          spec.mixture_gaussian_fraction * static_cast<double>(m - n_sp)));
      shuffle_prefix(n_sp + n_g);
      for (std::size_t i = 0; i < n_sp; ++i)
        out[observed[i]] += rng.uniform(spec.sparse_lo, spec.sparse_hi);
      for (std::size_t i = n_sp; i < n_sp + n_g; ++i)
        out[observed[i]] += rng.normal(0.0, spec.mixture_gaussian_variance);
      for (std::size_t i = n_sp + n_g; i < m; ++i)
        out[observed[i]] += rng.normal(0.0, spec.mixture_residual_variance);
      break;
    }
  }
  return out;
}

}  // namespace lrtf
