#include "salem/config.hpp"
#include "salem/construct.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace salem {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> RunConfig::levels() const {
  if (!M.empty()) return M;
  if (growth) return growth_policy(growth->M1, growth->depth, growth->exponent);
  throw ConfigError("either M or growth must be given");
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["field"] = {{"poly", poly}, {"assume_maximal", assume_maximal}};
  j["tau"] = tau;
  j["rho"] = rho;
  j["M"] = M;
  if (growth)
    j["growth"] = {{"M1", growth->M1}, {"depth", growth->depth}, {"exponent", growth->exponent}};
  else
    j["growth"] = nullptr;
  j["N"] = N;
  j["M0"] = M0;
  j["k"] = k;
  j["seed"] = seed;
  j["workers"] = workers;
  j["output"] = output;
  j["tolerances"] = {{"slope", tol.slope}, {"oracle", tol.oracle}, {"quadrature", tol.quadrature},
                     {"exp_sum", tol.exp_sum}};
  j["caps"] = {{"points", caps.points}, {"terms", caps.terms}, {"grid_budget", caps.grid_budget}};
  ordered_json conv = ordered_json::array();
  for (auto [a, b] : verify.conv) conv.push_back({a, b});
  j["verify"] = {{"exp_sum_norm", verify.exp_sum_norm}, {"exp_sum_radius", verify.exp_sum_radius},
                 {"ideal_norm", verify.ideal_norm},     {"p_max", verify.p_max},
                 {"crt_norm", verify.crt_norm},         {"crt_trials", verify.crt_trials},
                 {"separation_norm", verify.separation_norm}, {"landau_M", verify.landau_M},
                 {"quad_samples", verify.quad_samples}, {"spectrum_radius", verify.spectrum_radius},
                 {"conv", conv}};
  j["decay"] = {{"radii", decay.radii}, {"oracle_points", decay.oracle_points}, {"s_min", decay.s_min},
                {"s_max", decay.s_max}, {"t_max", decay.t_max}};
  j["regularity"] = {{"radii", regularity.radii}, {"centers", regularity.centers}};
  j["restriction"] = {{"p", restriction.p}, {"q", restriction.q}, {"M", restriction.M},
                      {"freq_step", restriction.freq_step}, {"box_radius", restriction.box_radius}};
  j["dimension"] = {{"norm_bounds", dimension.norm_bounds}, {"offset", dimension.offset},
                    {"membership_points", dimension.membership_points}, {"membership_norm", dimension.membership_norm}};
  j["measure"] = {{"samples", measure.samples}, {"array_radius", measure.array_radius}};
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  only_keys(j, "config",
            {"field", "tau", "rho", "M", "growth", "N", "M0", "k", "seed", "workers", "output", "tolerances", "caps",
             "verify", "decay", "regularity", "restriction", "dimension", "measure", "$schema"});
  if (j.contains("field")) {
    only_keys(j["field"], "field", {"poly", "assume_maximal"});
    read(j["field"], "poly", c.poly, "field");
    read(j["field"], "assume_maximal", c.assume_maximal, "field");
  }
  read(j, "tau", c.tau, "config");
  read(j, "rho", c.rho, "config");
  read(j, "M", c.M, "config");
  if (j.contains("growth") && !j["growth"].is_null()) {
    only_keys(j["growth"], "growth", {"M1", "depth", "exponent"});
    GrowthPolicy g;
    read(j["growth"], "M1", g.M1, "growth");
    read(j["growth"], "depth", g.depth, "growth");
    read(j["growth"], "exponent", g.exponent, "growth");
    c.growth = g;
    if (!j.contains("M")) c.M.clear();
  }
  read(j, "N", c.N, "config");
  read(j, "M0", c.M0, "config");
  read(j, "k", c.k, "config");
  read(j, "seed", c.seed, "config");
  read(j, "workers", c.workers, "config");
  read(j, "output", c.output, "config");
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    only_keys(t, "tolerances", {"slope", "oracle", "quadrature", "exp_sum"});
    read(t, "slope", c.tol.slope, "tolerances");
    read(t, "oracle", c.tol.oracle, "tolerances");
    read(t, "quadrature", c.tol.quadrature, "tolerances");
    read(t, "exp_sum", c.tol.exp_sum, "tolerances");
  }
  if (j.contains("caps")) {
    const json& t = j["caps"];
    only_keys(t, "caps", {"points", "terms", "grid_budget"});
    read(t, "points", c.caps.points, "caps");
    read(t, "terms", c.caps.terms, "caps");
    read(t, "grid_budget", c.caps.grid_budget, "caps");
  }
  if (j.contains("verify")) {
    const json& t = j["verify"];
    only_keys(t, "verify",
              {"exp_sum_norm", "exp_sum_radius", "ideal_norm", "p_max", "crt_norm", "crt_trials", "separation_norm",
               "landau_M", "quad_samples", "spectrum_radius", "conv"});
    read(t, "exp_sum_norm", c.verify.exp_sum_norm, "verify");
    read(t, "exp_sum_radius", c.verify.exp_sum_radius, "verify");
    read(t, "ideal_norm", c.verify.ideal_norm, "verify");
    read(t, "p_max", c.verify.p_max, "verify");
    read(t, "crt_norm", c.verify.crt_norm, "verify");
    read(t, "crt_trials", c.verify.crt_trials, "verify");
    read(t, "separation_norm", c.verify.separation_norm, "verify");
    read(t, "landau_M", c.verify.landau_M, "verify");
    read(t, "quad_samples", c.verify.quad_samples, "verify");
    read(t, "spectrum_radius", c.verify.spectrum_radius, "verify");
    read(t, "conv", c.verify.conv, "verify");
  }
  if (j.contains("decay")) {
    const json& t = j["decay"];
    only_keys(t, "decay", {"radii", "oracle_points", "s_min", "s_max", "t_max"});
    read(t, "radii", c.decay.radii, "decay");
    read(t, "oracle_points", c.decay.oracle_points, "decay");
    read(t, "s_min", c.decay.s_min, "decay");
    read(t, "s_max", c.decay.s_max, "decay");
    read(t, "t_max", c.decay.t_max, "decay");
  }
  if (j.contains("regularity")) {
    const json& t = j["regularity"];
    only_keys(t, "regularity", {"radii", "centers"});
    read(t, "radii", c.regularity.radii, "regularity");
    read(t, "centers", c.regularity.centers, "regularity");
  }
  if (j.contains("restriction")) {
    const json& t = j["restriction"];
    only_keys(t, "restriction", {"p", "q", "M", "freq_step", "box_radius"});
    read(t, "p", c.restriction.p, "restriction");
    read(t, "q", c.restriction.q, "restriction");
    read(t, "M", c.restriction.M, "restriction");
    read(t, "freq_step", c.restriction.freq_step, "restriction");
    read(t, "box_radius", c.restriction.box_radius, "restriction");
  }
  if (j.contains("dimension")) {
    const json& t = j["dimension"];
    only_keys(t, "dimension", {"norm_bounds", "offset", "membership_points", "membership_norm"});
    read(t, "norm_bounds", c.dimension.norm_bounds, "dimension");
    read(t, "offset", c.dimension.offset, "dimension");
    read(t, "membership_points", c.dimension.membership_points, "dimension");
    read(t, "membership_norm", c.dimension.membership_norm, "dimension");
  }
  if (j.contains("measure")) {
    const json& t = j["measure"];
    only_keys(t, "measure", {"samples", "array_radius"});
    read(t, "samples", c.measure.samples, "measure");
    read(t, "array_radius", c.measure.array_radius, "measure");
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

void RunConfig::validate() const {
  const int d = static_cast<int>(poly.size()) - 1;
  if (d < 1 || poly.back() != 1) throw ConfigError("field.poly must be monic of degree >= 1, constant term first");
  if (!(tau > 1)) throw ConfigError("tau must exceed 1");
  if (!(rho > -d && rho < d)) throw ConfigError("rho must lie in (-d, d)");
  const auto Ms = levels();
  if (Ms.empty()) throw ConfigError("M must list at least one level");
  for (std::size_t i = 0; i < Ms.size(); ++i) {
    if (!(Ms[i] >= 2)) throw ConfigError("every M_k must be at least 2");
    if (i > 0 && !(Ms[i] > Ms[i - 1])) throw ConfigError("M must be strictly increasing");
  }
  if (growth && (growth->depth < 1 || !(growth->M1 >= 2) || !(growth->exponent >= 1)))
    throw ConfigError("growth needs M1 >= 2, depth >= 1, exponent >= 1");
  if (N <= 2 * d) throw ConfigError("N must exceed 2d");
  if (M0 < 0) throw ConfigError("M0 must be nonnegative");
  if (k < -1 || k > static_cast<int>(Ms.size())) throw ConfigError("k must be -1 or a level index 0..depth");
  if (workers < 1) throw ConfigError("workers must be positive");
  if (output.empty()) throw ConfigError("output directory must be set");
  if (!(tol.slope > 0 && tol.oracle > 0 && tol.quadrature > 0 && tol.exp_sum > 0))
    throw ConfigError("tolerances must be positive");
  if (caps.points < 1 || caps.terms < 1 || !(caps.grid_budget > 0)) throw ConfigError("caps must be positive");
  if (verify.exp_sum_norm < 1 || verify.exp_sum_radius < 0 || verify.ideal_norm < 1 || verify.p_max < 2 ||
      verify.crt_norm < 2 || verify.crt_trials < 1 || verify.separation_norm < 1 || verify.quad_samples < 1 ||
      verify.spectrum_radius < 0)
    throw ConfigError("verify parameters out of range");
  for (auto [A, B] : verify.conv)
    if (!(A >= 1 && A <= B)) throw ConfigError("verify.conv needs 1 <= A <= B");
  if (decay.radii < 2 || decay.oracle_points < 0) throw ConfigError("decay parameters out of range");
  if (regularity.radii < 2 || regularity.centers < 1) throw ConfigError("regularity parameters out of range");
  if (!(restriction.q >= 1) || restriction.M.size() != 2 || !(restriction.M[0] < restriction.M[1]))
    throw ConfigError("restriction needs q >= 1 and two increasing M values");
  for (double p : restriction.p)
    if (!(p >= 1)) throw ConfigError("restriction.p values must be >= 1");
  if (dimension.norm_bounds.size() < 2 || !(dimension.offset > 0) || dimension.membership_points < 1 ||
      dimension.membership_norm < 2)
    throw ConfigError("dimension parameters out of range");
  for (std::size_t i = 1; i < dimension.norm_bounds.size(); ++i)
    if (dimension.norm_bounds[i] <= dimension.norm_bounds[i - 1]) throw ConfigError("norm_bounds must increase");
  if (measure.samples < 1 || measure.array_radius < 0) throw ConfigError("measure parameters out of range");
}

std::string RunConfig::hash() const { return fnv1a_hex(to_json().dump()); }

}  // namespace salem
