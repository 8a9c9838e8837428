#pragma once

#include "salem/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace salem {

struct ConfigError : Error {
  using Error::Error;
};

struct GrowthPolicy {
  double M1 = 8;
  int depth = 2;
  double exponent = 1.5;
};

struct RunConfig {
  std::vector<long> poly{1, 0, 1};
  bool assume_maximal = false;
  double tau = 2;
  double rho = 0;
  std::vector<double> M{8, 16};
  std::optional<GrowthPolicy> growth;  // used when M is empty
  int N = 24;
  double M0 = 0;
  int k = -1;  // -1: deepest level (restriction: 1)
  std::uint64_t seed = 1;
  int workers = 1;
  std::string output = "out";

  struct Tolerances {
    double slope = 0.15;
    double oracle = 1e-6;
    double quadrature = 1e-7;
    double exp_sum = 1e-9;
  } tol;
  struct Caps {
    std::int64_t points = 1'000'000;
    std::int64_t terms = 20'000'000;
    double grid_budget = 5e11;
  } caps;

  struct Verify {
    std::int64_t exp_sum_norm = 100;
    std::int64_t exp_sum_radius = 12;
    std::int64_t ideal_norm = 50;
    std::int64_t p_max = 200;
    std::int64_t crt_norm = 50;
    int crt_trials = 20;
    std::int64_t separation_norm = 50;
    std::vector<double> landau_M{8, 16, 32, 64};
    int quad_samples = 50;
    std::int64_t spectrum_radius = 40;
    std::vector<std::pair<double, double>> conv{{32, 256}, {64, 1024}};
  } verify;
  struct Decay {
    int radii = 40;
    int oracle_points = 50;
    double s_min = 0, s_max = 0, t_max = 0;
  } decay;
  struct Regularity {
    int radii = 40;
    int centers = 40;
  } regularity;
  struct Restriction {
    std::vector<double> p;  // empty: p_fail - 1 and p_fail + 1
    double q = 2;
    std::vector<double> M{8, 16};
    double freq_step = 0, box_radius = 0;
  } restriction;
  struct Dimension {
    std::vector<std::int64_t> norm_bounds{100, 1000, 10000};
    double offset = 0.3;
    int membership_points = 20;
    std::int64_t membership_norm = 1000;
  } dimension;
  struct Measure {
    int samples = 50;
    std::int64_t array_radius = 6;
  } measure;

  std::vector<double> levels() const;  // M list after applying the growth policy
  nlohmann::ordered_json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  void validate() const;
  std::string hash() const;
};

std::string fnv1a_hex(const std::string& bytes);

}  // namespace salem
