#include "salem/commands.hpp"
#include "salem/analyze.hpp"
#include "salem/report.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>

namespace salem {

using nlohmann::ordered_json;

namespace {

NumberField make_field(const RunConfig& cfg) {
  IntPoly p;
  for (long c : cfg.poly) p.push_back(Integer(c));
  return NumberField::from_polynomial(p, cfg.assume_maximal);
}

int level_or_default(const RunConfig& cfg, int depth) { return cfg.k < 0 ? depth : cfg.k; }

// Runs the jobs on up to `workers` threads; results keep the submission order.
template <typename T>
std::vector<T> run_jobs(const std::vector<std::function<T()>>& jobs, int workers) {
  std::vector<T> out;
  out.reserve(jobs.size());
  if (workers <= 1) {
    for (auto& j : jobs) out.push_back(j());
    return out;
  }
  for (std::size_t i = 0; i < jobs.size(); i += static_cast<std::size_t>(workers)) {
    std::vector<std::future<T>> batch;
    for (std::size_t j = i; j < std::min(jobs.size(), i + static_cast<std::size_t>(workers)); ++j)
      batch.push_back(std::async(std::launch::async, jobs[j]));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

void emit(const ReportWriter& w, const std::string& name, const LemmaReport& r, std::ostream& log) {
  w.json(name, r.to_json());
  if (!r.csv.empty()) w.csv(name, r.csv);
  log << (r.pass ? "PASS " : "FAIL ") << name << "  " << r.instance << "\n";
}

ordered_json fit_report(const std::string& id, const std::string& instance, const ordered_json& body, bool pass) {
  ordered_json j;
  j["id"] = id;
  j["instance"] = instance;
  j["pass"] = pass;
  j["result"] = body;
  return j;
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  const auto& v = cfg.verify;
  const std::int64_t worst = std::max({v.exp_sum_norm, v.crt_norm * v.crt_norm, 4 * v.separation_norm * v.separation_norm});
  if (worst > cfg.caps.points)
    throw CapExceeded("verify needs enumerations of up to " + std::to_string(worst) + " points; caps.points is " +
                      std::to_string(cfg.caps.points));
  const NumberField K = make_field(cfg);
  const Construction C(K, cfg.tau, cfg.rho, cfg.levels(), cfg.N, cfg.M0);
  const int d = K.degree();
  ReportWriter w(cfg, "verify");
  std::vector<std::string> names;
  std::vector<std::function<LemmaReport()>> jobs;
  auto add = [&](std::string n, std::function<LemmaReport()> f) {
    names.push_back(std::move(n));
    jobs.push_back(std::move(f));
  };
  add("formulas", [&] { return check_formulas(d, 1000, cfg.seed); });
  add("exp_sum", [&] { return check_exp_sum(K, v.exp_sum_norm, v.exp_sum_radius); });
  add("ideal_laws", [&] { return check_ideal_laws(K, v.ideal_norm, v.p_max, cfg.seed); });
  add("crt", [&] { return check_crt(K, v.crt_norm, v.crt_trials, cfg.seed); });
  add("separation", [&] { return check_separation(K, v.separation_norm); });
  add("landau", [&] { return landau_check(K, v.landau_M); });
  for (int k = 1; k <= C.depth(); ++k) {
    add("separation_facts_k" + std::to_string(k), [&, k] { return check_separation_facts(C, k); });
    add("Fk_spectrum_k" + std::to_string(k),
        [&, k] { return check_Fk_spectrum(C, k, v.spectrum_radius, v.quad_samples, cfg.seed + static_cast<std::uint64_t>(k)); });
  }
  if (d == 2) {
    for (auto [A, B] : v.conv) {
      std::ostringstream n;
      n << "convstab_A" << A << "_B" << B;
      add(n.str(), [&, A = A, B = B] { return convstab_check(conv_default(A, B, cfg.seed)); });
    }
    if (!v.conv.empty()) {
      add("convstab_delta", [&] {
        ConvInstance c = conv_default(v.conv.front().first, v.conv.front().second, cfg.seed);
        c.delta_G = true;
        return convstab_check(c);
      });
    }
  }
  auto results = run_jobs(jobs, cfg.workers);
  bool all = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    emit(w, names[i], results[i], log);
    all = all && results[i].pass;
  }
  for (auto& s : C.warnings()) log << "warning: " << s << "\n";
  return all ? kExitPass : kExitLemma;
}

int cmd_measure(const RunConfig& cfg, std::ostream& log) {
  const NumberField K = make_field(cfg);
  const Construction C(K, cfg.tau, cfg.rho, cfg.levels(), cfg.N, cfg.M0);
  const int k = level_or_default(cfg, C.depth());
  const int d = K.degree();
  ReportWriter w(cfg, "measure");
  w.json("construction", fit_report("construction", "parameters", ordered_json::parse(C.describe()), true));
  if (k == 0) {
    const BumpFamily& b = C.bump();
    const double mass = C.total_mass(0);
    const cplx h0 = b.phi0_hat(Vecd::Zero(d));
    LemmaReport r;
    r.id = "phi0";
    r.instance = "k = 0";
    r.computed = {{"mass", mass}, {"phi0_hat_0", {h0.real(), h0.imag()}}, {"support", {0.125, 0.375}},
                  {"value_at_centre", b.phi0_eval(Vecd::Constant(d, 0.25))}};
    r.bounds = {{"mass", "1 to 1e-9"}};
    r.pass = std::abs(mass - 1) <= 1e-9 && std::abs(h0 - cplx(1, 0)) <= 1e-9;
    emit(w, "phi0", r, log);
    return r.pass ? kExitPass : kExitLemma;
  }
  LemmaReport r = check_measure(C, k, cfg.measure.samples, cfg.seed);
  emit(w, "measure_k" + std::to_string(k), r, log);
  const Veci lo = Veci::Constant(d, -cfg.measure.array_radius), hi = Veci::Constant(d, cfg.measure.array_radius);
  w.csv("mu_hat_k" + std::to_string(k), C.mu_hat_array(k, lo, hi).to_csv());
  for (auto& s : C.warnings()) log << "warning: " << s << "\n";
  return r.pass ? kExitPass : kExitLemma;
}

int cmd_decay(const RunConfig& cfg, std::ostream& log) {
  const NumberField K = make_field(cfg);
  const Construction C(K, cfg.tau, cfg.rho, cfg.levels(), cfg.N, cfg.M0);
  const int k = level_or_default(cfg, C.depth());
  if (k < 1) throw DomainError("decay needs k >= 1");
  DecayOptions o;
  o.radii = cfg.decay.radii;
  o.oracle_points = cfg.decay.oracle_points;
  o.s_min = cfg.decay.s_min;
  o.s_max = cfg.decay.s_max;
  o.t_max = cfg.decay.t_max;
  o.seed = cfg.seed;
  DecayResult res = decay_scan(C, k, o);
  const bool pass = res.fit.pass && res.oracle_pass;
  ReportWriter w(cfg, "decay");
  const std::string name = "decay_k" + std::to_string(k);
  w.json(name, fit_report("decay", "level " + std::to_string(k), res.to_json(), pass));
  w.csv(name, res.csv);
  log << (pass ? "PASS " : "FAIL ") << name << "  slope " << res.fit.slope << " target " << res.fit.target
      << " oracle max diff " << res.oracle_max_diff << "\n";
  for (auto& s : C.warnings()) log << "warning: " << s << "\n";
  return pass ? kExitPass : kExitLemma;
}

int cmd_regularity(const RunConfig& cfg, std::ostream& log) {
  const NumberField K = make_field(cfg);
  const Construction C(K, cfg.tau, cfg.rho, cfg.levels(), cfg.N, cfg.M0);
  const int k = level_or_default(cfg, C.depth());
  if (k < 1) throw DomainError("regularity needs k >= 1");
  RegularityResult res = regularity_scan(C, k, cfg.regularity.radii, cfg.regularity.centers);
  const bool pass = res.fit.pass && res.kball.pass;
  ReportWriter w(cfg, "regularity");
  const std::string name = "regularity_k" + std::to_string(k);
  w.json(name, fit_report("regularity", "level " + std::to_string(k), res.to_json(), pass));
  w.csv(name, res.csv);
  log << (pass ? "PASS " : "FAIL ") << name << "  slope " << res.fit.slope << " target " << res.fit.target << "\n";
  return pass ? kExitPass : kExitLemma;
}

int cmd_restriction(const RunConfig& cfg, std::ostream& log) {
  const NumberField K = make_field(cfg);
  const int d = K.degree();
  const double pf = p_fail(cfg.tau, cfg.rho, cfg.restriction.q, d);
  std::vector<double> ps = cfg.restriction.p;
  if (ps.empty()) ps = {pf - 1, pf + 1};
  ReportWriter w(cfg, "restriction");
  std::vector<std::vector<RestrictionResult>> runs;
  std::vector<LemmaReport> lbs;
  std::ostringstream csv;
  csv.precision(17);
  csv << "M,p,q,numerator,denominator,ratio,freq_step,box_radius,grid_points\n";
  for (double M : cfg.restriction.M) {
    const Construction C(K, cfg.tau, cfg.rho, {M}, cfg.N, cfg.M0);
    runs.push_back(restriction_ratios(C, 1, ps, cfg.restriction.q, cfg.restriction.freq_step,
                                      cfg.restriction.box_radius, cfg.caps.grid_budget));
    for (auto& r : runs.back())
      csv << M << "," << r.p << "," << r.q << "," << r.numerator << "," << r.denominator << "," << r.ratio << ","
          << r.freq_step << "," << r.box_radius << "," << r.grid_points << "\n";
    lbs.push_back(lower_bound_check(C, 1));
  }
  ordered_json growth = ordered_json::array();
  bool pass = true;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double g = runs[1][i].ratio / runs[0][i].ratio;
    const bool below = ps[i] < pf;
    const bool ok = below ? g >= 1.5 : g <= 1.2;
    pass = pass && ok;
    growth.push_back({{"p", ps[i]},
                      {"p_fail", pf},
                      {"ratio_small_M", runs[0][i].to_json()},
                      {"ratio_large_M", runs[1][i].to_json()},
                      {"growth", g},
                      {"requirement", below ? "growth >= 1.5" : "growth <= 1.2"},
                      {"pass", ok}});
    log << (ok ? "PASS " : "FAIL ") << "restriction p=" << ps[i] << " growth " << g << "\n";
  }
  const double c0 = lbs[0].fitted_constant, c1 = lbs[1].fitted_constant;
  const bool lb_ok = lbs[0].pass && lbs[1].pass && c0 > 0 && c1 > 0 && std::max(c0 / c1, c1 / c0) <= 4;
  pass = pass && lb_ok;
  ordered_json body = {{"growth", growth},
                       {"lower_bound", {lbs[0].to_json(), lbs[1].to_json()}},
                       {"lower_bound_constants_within_4", lb_ok},
                       {"surrogate", "two-point comparison at M values " + ordered_json(cfg.restriction.M).dump() +
                                         ", k = 1, not a limit over odd k"}};
  w.json("restriction", fit_report("restriction", "two-point growth", body, pass));
  w.csv("restriction", csv.str());
  log << (lb_ok ? "PASS " : "FAIL ") << "lower bound constants " << c0 << " " << c1 << "\n";
  return pass ? kExitPass : kExitLemma;
}

int cmd_dimension(const RunConfig& cfg, std::ostream& log) {
  const NumberField K = make_field(cfg);
  ReportWriter w(cfg, "dimension");
  LemmaReport dim = dimension_report(K, cfg.tau, cfg.dimension.norm_bounds, cfg.dimension.offset);
  emit(w, "covering_sums", dim, log);
  const Construction C(K, cfg.tau, cfg.rho, cfg.levels(), cfg.N, cfg.M0);
  LemmaReport mem = support_membership(C, 1, cfg.dimension.membership_points, cfg.dimension.membership_norm);
  emit(w, "membership", mem, log);
  return dim.pass && mem.pass ? kExitPass : kExitLemma;
}

int cmd_report(const RunConfig& cfg, std::ostream& log) {
  auto s = merge_reports(cfg.output);
  for (auto& r : s["reports"]) log << (r["pass"].get<bool>() ? "PASS " : "FAIL ") << r["file"].get<std::string>() << "\n";
  return s["all_pass"].get<bool>() ? kExitPass : kExitLemma;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
    if (name == "verify") return cmd_verify(cfg, log);
    if (name == "measure") return cmd_measure(cfg, log);
    if (name == "decay") return cmd_decay(cfg, log);
    if (name == "regularity") return cmd_regularity(cfg, log);
    if (name == "restriction") return cmd_restriction(cfg, log);
    if (name == "dimension") return cmd_dimension(cfg, log);
    if (name == "report") return cmd_report(cfg, log);
    throw ConfigError("unknown command " + name);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CapExceeded& e) {
    log << "cap exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const CheckFailure& e) {
    log << "check failed: " << e.what() << "\n";
    return kExitLemma;
  }
}

}  // namespace salem
