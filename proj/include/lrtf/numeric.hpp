// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lrtf/tensor.hpp"

namespace lrtf {

namespace detail {

inline void check_nonnegative(const DenseTensor& w, const char* who) {
  for (std::size_t f = 0; f < w.size(); ++f)
    check(w[f] >= 0.0, std::string(who) + ": weights must be nonnegative");
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Derives an independent stream seed from a base seed. Used wherever one
/// user-facing seed has to drive several unrelated sampling stages.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return detail::splitmix64(seed ^ detail::splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

/// Deterministic random source: a seeded mt19937_64 with explicit uniform and
/// Box-Muller normal mappings, so a given seed reproduces the same stream for
/// a given build (the std <random> distributions are implementation-defined;
/// these mappings are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  /// Independent substream; does not consume from this generator.
  [[nodiscard]] Rng split(std::uint64_t stream) const {
    return Rng(derive_seed(seed_, stream));
  }

  /// Uniform on [0,1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    detail::check(lo <= hi, "uniform: lo must not exceed hi");
    return lo + (hi - lo) * uniform01();
  }

  double standard_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mu, double sigma2) {
    detail::check(sigma2 >= 0.0, "normal: variance must be nonnegative");
    return mu + std::sqrt(sigma2) * standard_normal();
  }

  /// Unbiased draw from [0, n) via rejection.
  std::size_t uniform_index(std::size_t n) {
    detail::check(n >= 1, "uniform_index: n must be positive");
    const std::uint64_t nn = n;
    const std::uint64_t bucket = std::numeric_limits<std::uint64_t>::max() / nn;
    const std::uint64_t limit = bucket * nn;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return static_cast<std::size_t>(x / bucket);
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// n i.i.d. draws from N(mu, sigma2); deterministic per rng state.
inline std::vector<double> sample_gaussian(Rng& rng, double mu, double sigma2,
                                           std::size_t n) {
  detail::check(sigma2 >= 0.0, "sample_gaussian: variance must be nonnegative");
  std::vector<double> out(n);
  for (double& v : out) v = rng.normal(mu, sigma2);
  return out;
}

/// n i.i.d. draws uniform on [lo, hi]; deterministic per rng state.
inline std::vector<double> sample_uniform(Rng& rng, double lo, double hi,
                                          std::size_t n) {
  detail::check(lo <= hi, "sample_uniform: lo must not exceed hi");
  std::vector<double> out(n);
  for (double& v : out) v = rng.uniform(lo, hi);
  return out;
}

struct LstsqOptions {
  /// Singular values below rcond * sigma_max are treated as zero.
  /// 0 selects the default, 1e-12 * max(rows, cols).
  double rcond = 0.0;
};

/// Minimum-norm least-squares solution A^+ b via SVD with thresholded
/// singular values.
inline std::vector<double> lstsq_pinv(const Matrix& a, std::span<const double> b,
                                      const LstsqOptions& opts = {}) {
  detail::check(a.rows() > 0 && a.cols() > 0, "lstsq_pinv: empty matrix");
  detail::check(a.rows() == b.size(), "lstsq_pinv: rhs length must equal rows");
  detail::check(opts.rcond >= 0.0, "lstsq_pinv: rcond must be nonnegative");

  using RowMajorMap = Eigen::Map<
      const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  const RowMajorMap amap(a.data().data(), static_cast<Eigen::Index>(a.rows()),
                         static_cast<Eigen::Index>(a.cols()));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(amap, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double rcond =
      opts.rcond > 0.0 ? opts.rcond : 1e-12 * static_cast<double>(std::max(a.rows(), a.cols()));
  svd.setThreshold(rcond);
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(),
                                              static_cast<Eigen::Index>(b.size()));
  const Eigen::VectorXd x = svd.solve(rhs);
  return {x.data(), x.data() + x.size()};
}

/// argmin_h ||w (x) (e - d*h)||^2 = (sum w^2 e d) / (sum w^2 d^2).
/// Returns fallback when the denominator is below 1e-15.
inline double scalar_wls(std::span<const double> w, std::span<const double> e,
                         std::span<const double> d, double fallback) {
  detail::check(w.size() == e.size() && w.size() == d.size(),
                "scalar_wls: length mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double w2 = w[i] * w[i];
    num += w2 * e[i] * d[i];
    den += w2 * d[i] * d[i];
  }
  if (den < 1e-15) return fallback;
  return num / den;
}

/// log N(x | mu, sigma2).
inline double log_gauss_pdf(double x, double mu, double sigma2) {
  detail::check(sigma2 > 0.0, "log_gauss_pdf: variance must be positive");
  const double diff = x - mu;
  return -0.5 * std::log(2.0 * std::numbers::pi * sigma2) -
         diff * diff / (2.0 * sigma2);
}

}  // namespace lrtf
