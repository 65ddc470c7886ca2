// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lrtf/cp.hpp"
#include "lrtf/numeric.hpp"
#include "lrtf/tensor.hpp"
#include "lrtf/tucker.hpp"

namespace lrtf {

/// Zero-mean Gaussian scale mixture over per-entry noise: mixing proportions
/// pi (sum to 1) and variances sigma2, one pair per component.
struct MoGState {
  std::vector<double> pi;
  std::vector<double> sigma2;

  [[nodiscard]] std::size_t components() const { return pi.size(); }
};

/// Posterior component weights for every observed entry, stored densely in
/// ascending flat-index order of the observation set.
struct Responsibilities {
  std::vector<std::size_t> observed;  // flat indices, ascending
  std::vector<double> gamma;          // observed.size() x components, row-major
  std::size_t components = 0;

  [[nodiscard]] double at(std::size_t entry, std::size_t k) const {
    return gamma[entry * components + k];
  }
};

enum class Backend { cp, tucker };

struct MoGConfig {
  std::size_t k = 3;
  Backend backend = Backend::cp;
  std::size_t cp_rank = 0;                // backend cp
  std::vector<std::size_t> tucker_ranks;  // backend tucker
  std::size_t em_max_iters = 50;
  double em_tol = 1e-6;      // relative change of the observed log-likelihood
  std::size_t init_sweeps = 5;
  std::size_t inner_sweeps = 3;
  double inner_tol = 1e-8;
  std::uint64_t seed = 0;
  LstsqOptions lstsq;
};

struct EmTraceEntry {
  std::size_t iteration;
  double log_likelihood;     // observed-data log-likelihood
  double weighted_objective;
  bool sigma_floored;        // variance clamped or empty component re-seeded
};

struct RestorationResult {
  DenseTensor low_rank;
  MoGState mog;
  std::vector<EmTraceEntry> trace;
};

namespace detail {

inline void check_mog(const MoGState& mog) {
  check(mog.components() >= 1, "MoG needs at least one component");
  check(mog.pi.size() == mog.sigma2.size(), "MoG pi and sigma2 must pair up");
  double sum = 0.0;
  for (double p : mog.pi) {
    check(p >= 0.0, "MoG mixing proportions must be nonnegative");
    sum += p;
  }
  check(std::abs(sum - 1.0) < 1e-6, "MoG mixing proportions must sum to 1");
  for (double s : mog.sigma2) check(s > 0.0, "MoG variances must be positive");
}

inline void check_mask_against(const ObservationMask& mask, const DenseTensor& x) {
  check(mask.dims() == x.dims(), "mask dims must match the tensor dims");
}

inline double observed_variance(const DenseTensor& t, const ObservationMask& mask) {
  double sum = 0.0, sumsq = 0.0;
  std::size_t n = 0;
  for (std::size_t f = 0; f < t.size(); ++f) {
    if (!mask.observed(f)) continue;
    sum += t[f];
    sumsq += t[f] * t[f];
    ++n;
  }
  if (n == 0) return 0.0;
  const double mean = sum / static_cast<double>(n);
  return std::max(sumsq / static_cast<double>(n) - mean * mean, 0.0);
}

/// Lower bound on component variances; guards against collapse onto
/// exactly-fit entries.
inline double sigma_floor(const DenseTensor& x, const ObservationMask& mask) {
  return 1e-8 * observed_variance(x, mask) + 1e-12;
}

}  // namespace detail

/// Posterior responsibilities of each mixture component for every observed
/// entry, computed in log space with max-subtraction.
[[nodiscard]] inline Responsibilities e_step(const DenseTensor& x, const DenseTensor& l,
                                             const ObservationMask& mask,
                                             const MoGState& mog) {
  detail::check(x.same_dims(l), "e_step: dims mismatch");
  detail::check_mask_against(mask, x);
  detail::check_mog(mog);

  Responsibilities resp;
  resp.observed = mask.observed_indices();
  detail::check(!resp.observed.empty(), "e_step: mask has no observed entries");
  resp.components = mog.components();
  resp.gamma.resize(resp.observed.size() * resp.components);

  const std::size_t K = resp.components;
  std::vector<double> logpi(K);
  for (std::size_t k = 0; k < K; ++k)
    logpi[k] = mog.pi[k] > 0.0 ? std::log(mog.pi[k])
                               : -std::numeric_limits<double>::infinity();

  std::vector<double> ll(K);
  for (std::size_t e = 0; e < resp.observed.size(); ++e) {
    const std::size_t f = resp.observed[e];
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
      ll[k] = logpi[k] + log_gauss_pdf(x[f], l[f], mog.sigma2[k]);
      mx = std::max(mx, ll[k]);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      ll[k] = std::isfinite(ll[k]) ? std::exp(ll[k] - mx) : 0.0;
      sum += ll[k];
    }
    for (std::size_t k = 0; k < K; ++k) resp.gamma[e * K + k] = ll[k] / sum;
  }
  return resp;
}

/// Closed-form update of the mixture parameters given responsibilities:
/// pi_k = m_k / sum m, sigma2_k = weighted mean squared residual, with
/// variances clamped to the floor and empty components re-seeded wide.
/// sigma_floored, when given, reports whether either intervention fired.
[[nodiscard]] inline MoGState m_step_mog(const DenseTensor& x, const DenseTensor& l,
                                         const ObservationMask& mask,
                                         const Responsibilities& resp,
                                         bool* sigma_floored = nullptr) {
  detail::check(x.same_dims(l), "m_step_mog: dims mismatch");
  detail::check_mask_against(mask, x);
  detail::check(resp.components >= 1, "m_step_mog: responsibilities are empty");
  detail::check(resp.gamma.size() == resp.observed.size() * resp.components,
                "m_step_mog: responsibilities shape mismatch");

  const std::size_t K = resp.components;
  std::vector<double> mk(K, 0.0), sk(K, 0.0);
  for (std::size_t e = 0; e < resp.observed.size(); ++e) {
    const std::size_t f = resp.observed[e];
    const double r = x[f] - l[f];
    const double r2 = r * r;
    for (std::size_t k = 0; k < K; ++k) {
      const double g = resp.gamma[e * K + k];
      mk[k] += g;
      sk[k] += g * r2;
    }
  }
  double total = 0.0;
  for (double m : mk) total += m;

  MoGState out{std::vector<double>(K), std::vector<double>(K)};
  bool intervened = false;
  double max_var = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    out.pi[k] = mk[k] / total;
    out.sigma2[k] = mk[k] > 0.0 ? sk[k] / mk[k] : 0.0;
    max_var = std::max(max_var, out.sigma2[k]);
  }
  // Re-seed empty components wide so the next E step can repopulate them.
  for (std::size_t k = 0; k < K; ++k) {
    if (mk[k] < 1e-10) {
      out.sigma2[k] = max_var * 10.0;
      out.pi[k] = 1e-3;
      intervened = true;
    }
  }
  const double floor = detail::sigma_floor(x, mask);
  for (std::size_t k = 0; k < K; ++k) {
    if (out.sigma2[k] < floor) {
      out.sigma2[k] = floor;
      intervened = true;
    }
  }
  double pisum = 0.0;
  for (double p : out.pi) pisum += p;
  for (double& p : out.pi) p /= pisum;

  if (sigma_floored) *sigma_floored = intervened;
  return out;
}

/// Weight tensor of the inner weighted factorization problem:
/// w = sqrt(sum_k gamma_k / (2 pi sigma2_k)) on observed entries, 0 elsewhere.
[[nodiscard]] inline DenseTensor build_weight_tensor(const Responsibilities& resp,
                                                     const MoGState& mog,
                                                     const ObservationMask& mask) {
  detail::check_mog(mog);
  detail::check(resp.components == mog.components(),
                "build_weight_tensor: component count mismatch");
  DenseTensor w(mask.dims(), 0.0);
  const std::size_t K = resp.components;
  for (std::size_t e = 0; e < resp.observed.size(); ++e) {
    double s = 0.0;
    for (std::size_t k = 0; k < K; ++k)
      s += resp.gamma[e * K + k] / (2.0 * std::numbers::pi * mog.sigma2[k]);
    w[resp.observed[e]] = std::sqrt(s);
  }
  return w;
}

/// Observed-data log-likelihood: sum over observed entries of
/// log sum_k pi_k N(x | l, sigma2_k), log-sum-exp stabilized.
[[nodiscard]] inline double observed_log_likelihood(const DenseTensor& x,
                                                    const DenseTensor& l,
                                                    const ObservationMask& mask,
                                                    const MoGState& mog) {
  detail::check(x.same_dims(l), "observed_log_likelihood: dims mismatch");
  detail::check_mask_against(mask, x);
  detail::check_mog(mog);

  const std::size_t K = mog.components();
  std::vector<double> logpi(K);
  for (std::size_t k = 0; k < K; ++k)
    logpi[k] = mog.pi[k] > 0.0 ? std::log(mog.pi[k])
                               : -std::numeric_limits<double>::infinity();

  double total = 0.0;
  std::vector<double> ll(K);
  for (std::size_t f = 0; f < x.size(); ++f) {
    if (!mask.observed(f)) continue;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
      ll[k] = logpi[k] + log_gauss_pdf(x[f], l[f], mog.sigma2[k]);
      mx = std::max(mx, ll[k]);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k)
      sum += std::isfinite(ll[k]) ? std::exp(ll[k] - mx) : 0.0;
    total += mx + std::log(sum);
  }
  return total;
}

/// Expected complete-data objective, evaluated with the constants of the
/// model's published bound: sum over observed entries and components of
/// gamma * (log pi_k - log sqrt(2 pi sigma_k) - (x-l)^2 / (2 pi sigma2_k)),
/// with sigma_k the standard deviation. Note the unconventional constants;
/// the EM updates target the standard Gaussian form, which shares the same
/// minimizer in L (the weight rescaling is uniform).
[[nodiscard]] inline double expected_complete_ll(const DenseTensor& x,
                                                 const DenseTensor& l,
                                                 const ObservationMask& mask,
                                                 const MoGState& mog,
                                                 const Responsibilities& resp) {
  detail::check(x.same_dims(l), "expected_complete_ll: dims mismatch");
  detail::check_mask_against(mask, x);
  detail::check_mog(mog);
  detail::check(resp.components == mog.components(),
                "expected_complete_ll: component count mismatch");

  const std::size_t K = mog.components();
  double total = 0.0;
  for (std::size_t e = 0; e < resp.observed.size(); ++e) {
    const std::size_t f = resp.observed[e];
    const double r = x[f] - l[f];
    const double r2 = r * r;
    for (std::size_t k = 0; k < K; ++k) {
      const double g = resp.gamma[e * K + k];
      if (g <= 0.0) continue;
      const double sigma = std::sqrt(mog.sigma2[k]);
      total += g * (std::log(mog.pi[k]) -
                    std::log(std::sqrt(2.0 * std::numbers::pi * sigma)) -
                    r2 / (2.0 * std::numbers::pi * mog.sigma2[k]));
    }
  }
  return total;
}

namespace detail {

// Variance ladder for initialization: (.., 0.1, 1, 10, ..) scaled by the
// residual variance, component k getting 10^(k-1) relative spread.
inline MoGState init_mog_state(const DenseTensor& x, const DenseTensor& l,
                               const ObservationMask& mask, std::size_t k) {
  DenseTensor resid = x;
  for (std::size_t f = 0; f < resid.size(); ++f) resid[f] -= l[f];
  const double var = observed_variance(resid, mask);
  const double floor = sigma_floor(x, mask);
  MoGState mog{std::vector<double>(k, 1.0 / static_cast<double>(k)),
               std::vector<double>(k)};
  for (std::size_t j = 0; j < k; ++j) {
    const double spread = std::pow(10.0, static_cast<double>(j) - 1.0);
    mog.sigma2[j] = std::max(spread * var, floor);
  }
  return mog;
}

}  // namespace detail

/// Full noise-adaptive restoration loop: initialize the low-rank tensor with a
/// short binary-mask-weighted backend solve, then alternate E step, mixture
/// M step, weight-tensor construction, and a warm-started backend solve of
/// min_L ||W (x) (X - L)||_F^2 until the observed log-likelihood stalls.
[[nodiscard]] inline RestorationResult run_mog_gwlrtf(const DenseTensor& x,
                                                      const ObservationMask& mask,
                                                      const MoGConfig& config) {
  detail::check_mask_against(mask, x);
  detail::check(config.k >= 1, "run_mog_gwlrtf: need at least one component");
  detail::check(mask.observed_count() > 0, "run_mog_gwlrtf: no observed entries");
  if (config.backend == Backend::cp) {
    detail::check(x.order() == 3,
                  "run_mog_gwlrtf: the cp backend requires a 3-order tensor");
    detail::check(config.cp_rank >= 1, "run_mog_gwlrtf: cp rank must be positive");
  } else {
    detail::check(config.tucker_ranks.size() == static_cast<std::size_t>(x.order()),
                  "run_mog_gwlrtf: tucker ranks must match the tensor order");
  }

  std::optional<FactorSetCP> cp_state;
  std::optional<TuckerModel> tucker_state;
  const auto solve_backend = [&](const DenseTensor& w, std::size_t sweeps,
                                 double tol) -> DenseTensor {
    if (config.backend == Backend::cp) {
      CpSolveOptions o;
      o.max_sweeps = sweeps;
      o.tol = tol;
      o.lstsq = config.lstsq;
      cp_state = solve_gwlrtf_cp(x, w, *cp_state, o);
      return cp_reconstruct(*cp_state);
    }
    TuckerSolveOptions o;
    o.max_sweeps = sweeps;
    o.tol = tol;
    tucker_state = solve_gwlrtf_tucker(x, w, *tucker_state, o);
    return tucker_reconstruct(*tucker_state);
  };

  if (config.backend == Backend::cp) {
    const auto& d = x.dims();
    cp_state = cp_init({d[0], d[1], d[2]}, config.cp_rank, config.seed);
  } else {
    tucker_state = tucker_init(x.dims(), config.tucker_ranks, config.seed);
  }

  const DenseTensor binary_w = mask.to_weights();
  RestorationResult result;
  result.low_rank = solve_backend(binary_w, config.init_sweeps, 0.0);
  result.mog = detail::init_mog_state(x, result.low_rank, mask, config.k);

  double ll_prev = 0.0;
  for (std::size_t iter = 1; iter <= config.em_max_iters; ++iter) {
    const Responsibilities resp = e_step(x, result.low_rank, mask, result.mog);
    bool floored = false;
    result.mog = m_step_mog(x, result.low_rank, mask, resp, &floored);
    const DenseTensor w = build_weight_tensor(resp, result.mog, mask);
    result.low_rank = solve_backend(w, config.inner_sweeps, config.inner_tol);

    const double ll = observed_log_likelihood(x, result.low_rank, mask, result.mog);
    const double obj = weighted_objective(x, w, result.low_rank);
    result.trace.push_back({iter, ll, obj, floored});

    if (iter > 1 &&
        std::abs(ll - ll_prev) / std::max(std::abs(ll_prev), 1e-30) < config.em_tol)
      break;
    ll_prev = ll;
  }
  return result;
}

}  // namespace lrtf
