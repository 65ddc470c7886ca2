// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0
//
// lrtf command-line tool: synthetic data generation, noise-adaptive weighted
// low-rank tensor factorization (CP or Tucker backend), quality metrics, and
// image-stack restoration.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lrtf/lrtf.hpp"

namespace fs = std::filesystem;

namespace {

lrtf::NoiseSpec parse_noise(const std::string& text) {
  if (text.rfind("gaussian:", 0) == 0) {
    return lrtf::NoiseSpec::gaussian(std::stod(text.substr(9)));
  }
  if (text.rfind("sparse:", 0) == 0) {
    const std::string rest = text.substr(7);
    double f = 0, lo = 0, hi = 0;
    if (std::sscanf(rest.c_str(), "%lf,%lf,%lf", &f, &lo, &hi) != 3)
      throw std::invalid_argument("noise: expected sparse:FRACTION,LO,HI");
    return lrtf::NoiseSpec::sparse(f, lo, hi);
  }
  if (text == "mixture") return lrtf::NoiseSpec::mixture();
  throw std::invalid_argument(
      "noise: expected none, gaussian:V, sparse:F,LO,HI or mixture");
}

lrtf::MoGConfig make_config(const std::string& backend,
                            const std::vector<std::size_t>& rank, std::size_t k,
                            std::uint64_t seed, std::size_t em_iters, double em_tol,
                            std::size_t inner_sweeps, std::size_t init_sweeps,
                            int order) {
  lrtf::MoGConfig config;
  config.k = k;
  config.seed = seed;
  config.em_max_iters = em_iters;
  config.em_tol = em_tol;
  config.inner_sweeps = inner_sweeps;
  config.init_sweeps = init_sweeps;
  if (backend == "cp") {
    config.backend = lrtf::Backend::cp;
    if (rank.size() != 1)
      throw std::invalid_argument("the cp backend takes a single --rank value");
    config.cp_rank = rank[0];
  } else {
    config.backend = lrtf::Backend::tucker;
    if (rank.size() == 1) {
      config.tucker_ranks.assign(static_cast<std::size_t>(order), rank[0]);
    } else if (rank.size() == static_cast<std::size_t>(order)) {
      config.tucker_ranks = rank;
    } else {
      throw std::invalid_argument(
          "the tucker backend takes one --rank value per mode (or one shared value)");
    }
  }
  return config;
}

void write_trace_csv(const fs::path& path, const std::vector<lrtf::EmTraceEntry>& trace) {
  std::string csv = "iteration,log_likelihood,weighted_objective\n";
  char line[128];
  for (const auto& entry : trace) {
    std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g\n", entry.iteration,
                  entry.log_likelihood, entry.weighted_objective);
    csv += line;
  }
  lrtf::detail::write_file_atomic(path, csv);
}

int run_synth(const std::vector<std::size_t>& dims, std::size_t rank, double missing,
              const std::string& noise, std::uint64_t seed,
              const std::string& out_prefix) {
  if (dims.size() != 3)
    throw std::invalid_argument("synth: --dims takes exactly three values I,J,K");
  auto [x_gt, factors] = lrtf::gen_synthetic_cp({dims[0], dims[1], dims[2]}, rank, seed);
  const lrtf::ObservationMask mask =
      lrtf::apply_missing(x_gt.dims(), missing, lrtf::derive_seed(seed, 1));
  lrtf::DenseTensor x_no = x_gt;
  if (noise != "none")
    x_no = lrtf::add_noise(x_gt, mask, parse_noise(noise), lrtf::derive_seed(seed, 2));

  lrtf::write_tensor_file(out_prefix + "_gt.gwt", x_gt);
  lrtf::write_tensor_file(out_prefix + "_noisy.gwt", x_no);
  lrtf::write_mask_file(out_prefix + "_mask.gwm", mask);
  return 0;
}

int run_factorize(const std::string& backend, const std::vector<std::size_t>& rank,
                  std::size_t k, const fs::path& in, const std::string& mask_path,
                  const fs::path& out, const std::string& trace_path,
                  std::uint64_t seed, std::size_t em_iters, double em_tol,
                  std::size_t inner_sweeps, std::size_t init_sweeps) {
  const lrtf::DenseTensor x = lrtf::read_tensor_file(in);
  lrtf::ObservationMask mask(x.dims(), true);
  if (!mask_path.empty()) {
    mask = lrtf::read_mask_file(mask_path);
    if (mask.dims() != x.dims())
      throw std::invalid_argument("mask dims do not match the input tensor");
  }
  const lrtf::MoGConfig config = make_config(backend, rank, k, seed, em_iters, em_tol,
                                             inner_sweeps, init_sweeps, x.order());
  const lrtf::RestorationResult result = lrtf::run_mog_gwlrtf(x, mask, config);
  lrtf::write_tensor_file(out, result.low_rank);
  if (!trace_path.empty()) write_trace_csv(trace_path, result.trace);
  return 0;
}

int run_metrics(const fs::path& gt_path, const fs::path& rec_path,
                const std::string& no_path, const std::string& mask_path,
                double peak) {
  const lrtf::DenseTensor gt = lrtf::read_tensor_file(gt_path);
  const lrtf::DenseTensor rec = lrtf::read_tensor_file(rec_path);
  lrtf::DenseTensor no = gt;
  lrtf::ObservationMask mask(gt.dims(), true);
  if (!no_path.empty()) no = lrtf::read_tensor_file(no_path);
  if (!mask_path.empty()) {
    mask = lrtf::read_mask_file(mask_path);
    if (mask.dims() != gt.dims())
      throw std::invalid_argument("mask dims do not match the ground truth");
  }

  const lrtf::EMetrics em = lrtf::compute_e_metrics(no, gt, rec, mask);
  nlohmann::ordered_json j;
  j["e1"] = em.e1;
  j["e2"] = em.e2;
  j["e3"] = em.e3;
  j["e4"] = em.e4;
  j["psnr"] = lrtf::psnr(gt, rec, peak);
  j["rse"] = lrtf::rse(gt, rec);
  std::cout << j.dump() << "\n";
  return 0;
}

int run_restore_images(const std::vector<std::string>& inputs,
                       const std::string& backend,
                       const std::vector<std::size_t>& rank, std::size_t k,
                       std::uint64_t seed, std::size_t em_iters, double em_tol,
                       std::size_t inner_sweeps, std::size_t init_sweeps,
                       const fs::path& out_dir) {
  std::vector<lrtf::Image> images;
  images.reserve(inputs.size());
  for (const auto& p : inputs) images.push_back(lrtf::read_pnm(p));
  const std::size_t channels = images[0].channels;
  const lrtf::DenseTensor x = lrtf::stack_images(images);

  const lrtf::ObservationMask mask(x.dims(), true);
  const lrtf::MoGConfig config = make_config(backend, rank, k, seed, em_iters, em_tol,
                                             inner_sweeps, init_sweeps, x.order());
  const lrtf::RestorationResult result = lrtf::run_mog_gwlrtf(x, mask, config);

  fs::create_directories(out_dir);
  const std::vector<lrtf::Image> restored =
      lrtf::unstack_images(result.low_rank, channels, images.size());
  for (std::size_t i = 0; i < restored.size(); ++i)
    lrtf::write_pnm(out_dir / fs::path(inputs[i]).filename(), restored[i]);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted low-rank tensor factorization with mixture-of-Gaussians "
               "noise modeling"};
  app.require_subcommand(1);

  // synth
  std::vector<std::size_t> synth_dims{10, 10, 10};
  std::size_t synth_rank = 5;
  double synth_missing = 0.0;
  std::string synth_noise = "none";
  std::uint64_t synth_seed = 0;
  std::string synth_prefix;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic low-rank tensor, "
                                            "observation mask and noisy copy");
  synth->add_option("--dims", synth_dims, "Tensor dimensions I,J,K")->delimiter(',');
  synth->add_option("--rank", synth_rank, "Ground-truth CP rank");
  synth->add_option("--missing", synth_missing, "Missing-entry rate in [0,1)");
  synth->add_option("--noise", synth_noise,
                    "none | gaussian:V | sparse:F,LO,HI | mixture");
  synth->add_option("--seed", synth_seed, "Random seed");
  synth->add_option("--out-prefix", synth_prefix,
                    "Prefix for <prefix>_gt.gwt, <prefix>_noisy.gwt, <prefix>_mask.gwm")
      ->required();

  // factorize
  std::string fac_backend;
  std::vector<std::size_t> fac_rank;
  std::size_t fac_k = 3;
  std::string fac_in, fac_mask, fac_out, fac_trace;
  std::uint64_t fac_seed = 0;
  std::size_t fac_em_iters = 50, fac_inner = 3, fac_init = 5;
  double fac_em_tol = 1e-6;
  auto* fac = app.add_subcommand(
      "factorize", "Recover a low-rank tensor under mixture-of-Gaussians noise");
  fac->add_option("--backend", fac_backend, "cp | tucker")
      ->required()
      ->check(CLI::IsMember({"cp", "tucker"}));
  fac->add_option("--rank", fac_rank, "CP rank, or per-mode Tucker ranks r1,..,rN")
      ->required()
      ->delimiter(',');
  fac->add_option("--k", fac_k, "Number of mixture components");
  fac->add_option("--in", fac_in, "Input tensor file")->required();
  fac->add_option("--mask", fac_mask, "Observation mask file (default all observed)");
  fac->add_option("--out", fac_out, "Output tensor file")->required();
  fac->add_option("--trace", fac_trace, "Per-iteration CSV trace file");
  fac->add_option("--seed", fac_seed, "Random seed");
  fac->add_option("--em-iters", fac_em_iters, "Maximum EM iterations");
  fac->add_option("--em-tol", fac_em_tol, "Relative log-likelihood stopping tolerance");
  fac->add_option("--inner-sweeps", fac_inner, "Factorization sweeps per EM iteration");
  fac->add_option("--init-sweeps", fac_init, "Binary-mask sweeps used to initialize");

  // metrics
  std::string met_gt, met_rec, met_no, met_mask;
  double met_peak = 1.0;
  auto* met = app.add_subcommand("metrics",
                                 "Print a JSON quality report for a reconstruction");
  met->add_option("--gt", met_gt, "Ground-truth tensor file")->required();
  met->add_option("--rec", met_rec, "Reconstructed tensor file")->required();
  met->add_option("--no", met_no, "Noisy input tensor file (for e1/e2)");
  met->add_option("--mask", met_mask, "Observation mask file (for e1/e2)");
  met->add_option("--peak", met_peak, "PSNR peak value (1.0 for [0,1] data, 255 for 8-bit)");

  // restore-images
  std::vector<std::string> rest_in;
  std::string rest_backend;
  std::vector<std::size_t> rest_rank;
  std::size_t rest_k = 3;
  std::uint64_t rest_seed = 0;
  std::size_t rest_em_iters = 50, rest_inner = 3, rest_init = 5;
  double rest_em_tol = 1e-6;
  std::string rest_out_dir;
  auto* rest = app.add_subcommand("restore-images",
                                  "Restore a PGM/PPM image stack and re-emit images");
  rest->add_option("--in", rest_in, "Input image files (equal-sized PGM or PPM)")
      ->required()
      ->expected(-1);
  rest->add_option("--backend", rest_backend, "cp | tucker")
      ->required()
      ->check(CLI::IsMember({"cp", "tucker"}));
  rest->add_option("--rank", rest_rank, "CP rank, or per-mode Tucker ranks")
      ->required()
      ->delimiter(',');
  rest->add_option("--k", rest_k, "Number of mixture components");
  rest->add_option("--seed", rest_seed, "Random seed");
  rest->add_option("--em-iters", rest_em_iters, "Maximum EM iterations");
  rest->add_option("--em-tol", rest_em_tol, "Relative log-likelihood stopping tolerance");
  rest->add_option("--inner-sweeps", rest_inner, "Factorization sweeps per EM iteration");
  rest->add_option("--init-sweeps", rest_init, "Initialization sweeps");
  rest->add_option("--out-dir", rest_out_dir, "Directory for restored images")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed())
      return run_synth(synth_dims, synth_rank, synth_missing, synth_noise, synth_seed,
                       synth_prefix);
    if (fac->parsed())
      return run_factorize(fac_backend, fac_rank, fac_k, fac_in, fac_mask, fac_out,
                           fac_trace, fac_seed, fac_em_iters, fac_em_tol, fac_inner,
                           fac_init);
    if (met->parsed()) return run_metrics(met_gt, met_rec, met_no, met_mask, met_peak);
    if (rest->parsed())
      return run_restore_images(rest_in, rest_backend, rest_rank, rest_k, rest_seed,
                                rest_em_iters, rest_em_tol, rest_inner, rest_init,
                                rest_out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
