#pragma once

#include "salem/construct.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace salem {

using Json = nlohmann::ordered_json;

// Formula layer.
double pstar(double a, double b, int d);
double p_fail(double tau, double rho, double q, int d);
std::pair<double, double> map_ab_to_taurho(double a, double b, int d);

// Least-squares line through (x, y) samples with a one-sided exponent test.
struct ExponentFit {
  std::vector<std::pair<double, double>> samples;
  double slope = 0, intercept = 0, residual = 0;
  double target = 0, tolerance = 0.15;
  bool upper = true;  // pass iff slope <= target + tol; otherwise slope >= target - tol
  bool pass = false;
  double decades = 0;
  std::string note;
  Json to_json() const;
};
ExponentFit fit_exponent(std::vector<std::pair<double, double>> samples, double target, double tolerance, bool upper,
                         double min_decades = 1.5, std::size_t min_samples = 20);

struct LemmaReport {
  std::string id;
  std::string instance;
  Json computed = Json::object();
  Json bounds = Json::object();
  Json witnesses = Json::array();
  double fitted_constant = 0;
  bool pass = false;
  double runtime = 0;
  std::string csv;
  Json to_json() const;
};

// Round trip p_fail(map(a, b), 2, d) = pstar(a, b, d) on random (a, b) with b < 2a.
LemmaReport check_formulas(int d, int samples, std::uint64_t seed);

// Algebra and geometry checkers.
LemmaReport check_exp_sum(const NumberField& K, std::int64_t norm_bound, std::int64_t s_radius);
LemmaReport check_ideal_laws(const NumberField& K, std::int64_t norm_bound, std::int64_t p_max, std::uint64_t seed);
LemmaReport check_crt(const NumberField& K, std::int64_t norm_bound, int trials, std::uint64_t seed);
LemmaReport check_separation(const NumberField& K, std::int64_t norm_bound);
LemmaReport check_separation_facts(const Construction& C, int k);
LemmaReport landau_check(const NumberField& K, const std::vector<double>& Ms, double lo = 0.125, double hi = 4);

// Construction checkers.
LemmaReport check_Fk_spectrum(const Construction& C, int k, std::int64_t s_radius, int quad_samples,
                              std::uint64_t seed);
LemmaReport check_measure(const Construction& C, int k, int samples, std::uint64_t seed);

struct DecayOptions {
  double s_min = 0;  // 0: M_k
  double s_max = 0;  // 0: 4 M_k^{1+tau}
  int radii = 40;
  std::vector<Veci> rays;  // empty: defaults
  int oracle_points = 50;
  double t_max = 0;  // 0: 2 M_{k-1}^{1+tau} (k >= 2), 2 M_k^{1+tau} (k = 1)
  std::uint64_t seed = 1;
};
struct DecayResult {
  ExponentFit fit;
  double oracle_max_diff = 0;
  double oracle_tail = 0;
  int oracle_points = 0;
  bool oracle_pass = false;
  std::string csv;
  Json to_json() const;
};
DecayResult decay_scan(const Construction& C, int k, const DecayOptions& opt);

struct RegularityResult {
  ExponentFit fit;
  LemmaReport kball;
  std::string csv;
  Json to_json() const;
};
// Ball-mass envelope over radii in [eta_k, M_{k-1}^{-(1+tau)}] and the three k-ball bounds.
RegularityResult regularity_scan(const Construction& C, int k, int radii, int centers);

// S(J_k): s in T(delta^{-1} J_k) with |s| <= c M_k^{1+tau}.
std::vector<Veci> S_Jk(const Construction& C, int k);
LemmaReport lower_bound_check(const Construction& C, int k, int h_points = 200);

struct RestrictionResult {
  double numerator = 0;    // ||(Phi_J mu_k)^||_{L^p} over the sampled box
  double denominator = 0;  // ||Phi_J||_{L^q(mu_k)}
  double ratio = 0;
  double p = 0, q = 0;
  double freq_step = 0;
  double box_radius = 0;
  std::size_t grid_points = 0;
  double lipschitz_error = 0;  // Riemann-sum error estimate relative to the numerator^p
  Json to_json() const;
};
// Defaults: freq_step = 1/(2 log^2 M_k), box_radius = 2 M_k^{1+tau}. Several p share one pass over the grid.
std::vector<RestrictionResult> restriction_ratios(const Construction& C, int k, const std::vector<double>& ps, double q,
                                                  double freq_step = 0, double box_radius = 0,
                                                  double grid_budget = 5e11);
RestrictionResult restriction_ratio(const Construction& C, int k, double p, double q, double freq_step = 0,
                                    double box_radius = 0);

// Tensor-product transform of Phi_{J_k} mu_k at real frequencies.
class JMeasure {
 public:
  JMeasure(const Construction& C, int k);
  cplx hat(const Vecd& xi) const;
  // int Phi_J^q dmu_k
  double moment(double q) const;
  std::size_t terms() const { return terms_.size(); }
  // 1D transforms of every term on a grid xi = -R + j step, j = 0..n-1.
  void grid(double R, double step, std::size_t n, std::vector<std::vector<cplx>>& out) const;

 private:
  struct Term {
    double weight;
    Vecd lo, hi;
    std::vector<Vecd> centers;
    std::vector<double> etas;
    Vecd jcenter;
  };
  double factor(const Term& t, int i, double x, double qpow) const;
  const Construction* C_;
  double eta_;
  std::vector<Term> terms_;
};

// Synthetic instances of the convolution-stability lemma.
struct ConvInstance {
  int d = 2;
  int N = 24;
  double a = 1;
  double A = 32, B = 256, D = 0;
  double CH = 1;  // implicit constant in the H hypothesis
  std::uint64_t seed = 1;
  bool delta_G = false;
  double H_radius = 0;  // 0: 2A
};
double conv_L(double x);
double conv_G(const ConvInstance& inst, const Veci& t);
double conv_H(const ConvInstance& inst, const Veci& t);
// Checks the hypotheses on the instance; returns an empty string when they hold.
std::string conv_validate(const ConvInstance& inst, double (*H)(const ConvInstance&, const Veci&) = conv_H);
LemmaReport convstab_check(const ConvInstance& inst, double (*H)(const ConvInstance&, const Veci&) = conv_H);
ConvInstance conv_default(double A, double B, std::uint64_t seed);

// Dimension bound.
double hausdorff_cover_sum(const NumberField& K, double s_exp, double tau, std::int64_t lo_norm,
                           std::int64_t norm_bound);
LemmaReport dimension_report(const NumberField& K, double tau, const std::vector<std::int64_t>& norm_bounds,
                             double offset = 0.3);
LemmaReport support_membership(const Construction& C, int k, int count, std::int64_t norm_bound);

}  // namespace salem
