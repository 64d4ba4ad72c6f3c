#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "expfunc/bernstein.hpp"

namespace expfunc {

struct SimConfig {
  long sample_count = 1;
  std::uint64_t seed = 0;
  // Infinite-activity schemes: jumps >= epsilon are simulated exactly,
  // smaller ones become deterministic drift (mean compensation).
  double jump_threshold = 1e-2;
  // Path truncation once e^{-xi_t} <= stop_level; discarded mass is
  // bounded by stop_level * E[I].
  double stop_level = 1e-8;
  int worker_count = 1;
  long max_events = 100000000;
};

struct BatchSummary {
  double mean = 0.0;
  double variance = 0.0;
  // 1%, 25%, 50%, 75%, 99% empirical quantiles.
  std::array<double, 5> quantiles{};
};

struct SampleBatch {
  std::vector<double> draws;
  BatchSummary summary;
  SimConfig config;
  // Density variant: small jumps were compensated by drift, bias unquantified.
  bool small_jump_bias_flag = false;
};

SampleBatch sample_batch(const BernsteinSpec& spec, const SimConfig& config);

struct CompareRow {
  double x = 0.0;
  double empirical_tail = 0.0;
  double inverted_tail = 0.0;
  double z_score = 0.0;
  bool flagged = false;  // |z| > 4
};

std::vector<CompareRow> compare_to_inversion(const BernsteinSpec& spec,
                                             const SimConfig& config,
                                             const std::vector<double>& xs,
                                             double tol = 1e-8);

}  // namespace expfunc
