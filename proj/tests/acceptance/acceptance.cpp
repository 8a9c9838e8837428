// Acceptance suite: one PASS/FAIL line per criterion.
#include "salem/analyze.hpp"
#include "salem/commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace salem;
namespace fs = std::filesystem;

namespace {

NumberField field(std::initializer_list<long> c) {
  IntPoly p;
  for (long x : c) p.push_back(Integer(x));
  return NumberField::from_polynomial(p);
}

const NumberField& gaussian() {
  static const NumberField K = field({1, 0, 1});
  return K;
}
const NumberField& sqrt2() {
  static const NumberField K = field({-2, 0, 1});
  return K;
}

std::ostream& info() { return std::cout << "    "; }

void show(const LemmaReport& r) {
  info() << (r.pass ? "ok   " : "FAIL ") << r.id << " [" << r.instance << "] " << r.computed.dump() << "\n";
}

bool within(double a, double b, double factor) {
  return a > 0 && b > 0 && std::isfinite(a) && std::isfinite(b) && std::max(a / b, b / a) <= factor;
}

bool c1() {
  bool ok = true;
  for (const NumberField* K : {&gaussian(), &sqrt2()}) {
    auto r = check_exp_sum(*K, 100, 12);
    show(r);
    ok = ok && r.pass;
  }
  return ok;
}

bool c2() {
  bool ok = true;
  for (const NumberField* K : {&gaussian(), &sqrt2()}) {
    auto r = check_ideal_laws(*K, 50, 200, 1);
    show(r);
    ok = ok && r.pass;
  }
  return ok;
}

bool c3() {
  bool ok = true;
  for (const NumberField* K : {&gaussian(), &sqrt2()}) {
    auto r = check_crt(*K, 50, 20, 1);
    show(r);
    ok = ok && r.pass;
  }
  return ok;
}

bool c4() {
  auto g = check_separation(gaussian(), 50);
  show(g);
  bool ok = g.pass;
  for (double rho : {-1.0, 0.0, 1.0}) {
    const Construction C(gaussian(), 2, rho, {8, 16});
    for (int k = 1; k <= C.depth(); ++k) {
      auto r = check_separation_facts(C, k);
      r.instance += " rho=" + std::to_string(rho);
      show(r);
      ok = ok && r.pass;
    }
  }
  return ok;
}

bool c5() {
  bool ok = true;
  for (double rho : {-1.0, 0.0, 1.0}) {
    const Construction C(gaussian(), 2, rho, {8, 16});
    for (int k = 1; k <= C.depth(); ++k) {
      auto r = check_Fk_spectrum(C, k, 40, 50, 1 + static_cast<std::uint64_t>(k));
      show(r);
      ok = ok && r.pass;
    }
  }
  return ok;
}

bool c6() {
  bool ok = true;
  for (double rho : {0.0, 1.0}) {
    const Construction C(gaussian(), 2, rho, {8, 16});
    for (auto& w : C.warnings()) info() << "warning: " << w << "\n";
    DecayOptions opt;
    auto r = decay_scan(C, 2, opt);
    info() << (r.fit.pass && r.oracle_pass ? "ok   " : "FAIL ") << "decay k=2 rho=" << rho << " slope=" << r.fit.slope
           << " target<=" << r.fit.target + r.fit.tolerance << " samples=" << r.fit.samples.size()
           << " oracle_max_diff=" << r.oracle_max_diff << (r.fit.note.empty() ? "" : " note: " + r.fit.note) << "\n";
    ok = ok && r.fit.pass && r.oracle_pass;
    auto r1 = decay_scan(C, 1, opt);
    info() << "(info) decay k=1 rho=" << rho << " slope=" << r1.fit.slope << " oracle_max_diff=" << r1.oracle_max_diff
           << "\n";
  }
  return ok;
}

bool c7() {
  bool ok = true;
  for (double rho : {-1.0, 0.0, 1.0}) {
    std::vector<std::array<double, 3>> consts;
    for (double M : {8.0, 16.0}) {
      const Construction C(gaussian(), 2, rho, {M});
      auto r = regularity_scan(C, 1, 40, 40);
      const auto& kc = r.kball.computed;
      consts.push_back({kc["C1"].get<double>(), kc["C2"].get<double>(), kc["C3"].get<double>()});
      info() << (r.fit.pass && r.kball.pass ? "ok   " : "FAIL ") << "regularity rho=" << rho << " M=" << M
             << " slope=" << r.fit.slope << " target>=" << r.fit.target - r.fit.tolerance << " decades=" << r.fit.decades
             << " kball " << kc.dump() << "\n";
      ok = ok && r.fit.pass && r.kball.pass;
    }
    for (int i = 0; i < 3; ++i) {
      const bool t = within(consts[0][static_cast<std::size_t>(i)], consts[1][static_cast<std::size_t>(i)], 4);
      info() << (t ? "ok   " : "FAIL ") << "k-ball constant C" << i + 1 << " rho=" << rho << " transfer "
             << consts[0][static_cast<std::size_t>(i)] << " -> " << consts[1][static_cast<std::size_t>(i)] << "\n";
      ok = ok && t;
    }
  }
  return ok;
}

bool c8() {
  const double tau = 2, rho = 0;
  const double pf = p_fail(tau, rho, 2, 2);
  const std::vector<double> ps{pf - 1, pf + 1};
  std::vector<std::vector<RestrictionResult>> res;
  std::vector<double> lbs;
  bool ok = true;
  for (double M : {8.0, 16.0}) {
    const Construction C(gaussian(), tau, rho, {M});
    res.push_back(restriction_ratios(C, 1, ps, 2));
    for (auto& r : res.back())
      info() << "M=" << M << " p=" << r.p << " ratio=" << r.ratio << " box=" << r.box_radius
             << " step=" << r.freq_step << " grid=" << r.grid_points << "\n";
    auto lb = lower_bound_check(C, 1);
    show(lb);
    ok = ok && lb.pass;
    lbs.push_back(lb.fitted_constant);
  }
  const double g_low = res[1][0].ratio / res[0][0].ratio, g_high = res[1][1].ratio / res[0][1].ratio;
  info() << (g_low >= 1.5 ? "ok   " : "FAIL ") << "growth at p=" << ps[0] << ": " << g_low << " (needs >= 1.5)\n";
  info() << (g_high <= 1.2 ? "ok   " : "FAIL ") << "growth at p=" << ps[1] << ": " << g_high << " (needs <= 1.2)\n";
  const bool lb_ok = within(lbs[0], lbs[1], 4);
  info() << (lb_ok ? "ok   " : "FAIL ") << "lower-bound constants " << lbs[0] << " -> " << lbs[1] << "\n";
  return ok && g_low >= 1.5 && g_high <= 1.2 && lb_ok;
}

bool c9() {
  std::vector<LemmaReport> rs;
  for (auto [A, B] : {std::pair{32.0, 256.0}, std::pair{64.0, 1024.0}}) {
    rs.push_back(convstab_check(conv_default(A, B, 1)));
    show(rs.back());
  }
  bool ok = rs[0].pass && rs[1].pass;
  for (const char* c : {"conclusion1", "conclusion2", "conclusion3"}) {
    const std::string key = std::string("C") + c[10];
    const double a = rs[0].computed[c][key].get<double>(), b = rs[1].computed[c][key].get<double>();
    const bool t = within(a, b, 4);
    info() << (t ? "ok   " : "FAIL ") << key << " transfer " << a << " -> " << b << "\n";
    ok = ok && t;
  }
  ConvInstance delta = conv_default(32, 256, 1);
  delta.delta_G = true;
  auto d = convstab_check(delta);
  show(d);
  return ok && d.pass && d.computed["conclusion1"]["max_abs_diff"].get<double>() == 0;
}

bool c10() {
  auto dim = dimension_report(gaussian(), 2, {100, 1000, 10000}, 0.3);
  show(dim);
  const Construction C(gaussian(), 2, 0, {8, 16});
  auto mem = support_membership(C, 1, 20, 1000);
  show(mem);
  return dim.pass && mem.pass;
}

bool c11() {
  auto r = check_formulas(2, 1000, 1);
  show(r);
  return r.pass;
}

std::map<std::string, std::string> csv_snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    out[fs::relative(e.path(), dir).string()] = os.str();
  }
  return out;
}

bool c12() {
  const fs::path dir = fs::temp_directory_path() / "salem_acceptance_determinism";
  fs::remove_all(dir);
  RunConfig cfg;
  cfg.output = dir.string();
  std::ostringstream log;
  const int e1 = run_command("verify", cfg, log);
  auto first = csv_snapshot(dir);
  fs::remove_all(dir);
  const int e2 = run_command("verify", cfg, log);
  auto second = csv_snapshot(dir);
  info() << "exit codes " << e1 << " " << e2 << ", " << first.size() << " CSV files\n";
  bool same = !first.empty() && first.size() == second.size();
  for (auto& [name, bytes] : first) {
    auto it = second.find(name);
    if (it == second.end() || it->second != bytes) {
      info() << "FAIL differs: " << name << "\n";
      same = false;
    }
  }
  return same && e1 == e2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> which;
  app.add_option("--criterion", which, "criteria to run (default: all)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);
  if (which.empty())
    for (int i = 1; i <= 12; ++i) which.push_back(i);

  const std::vector<std::pair<const char*, std::function<bool()>>> criteria = {
      {"exponential-sum identity", c1}, {"ideal algebra laws", c2},   {"CRT brute-force equivalence", c3},
      {"separation", c4},               {"F_k spectrum", c5},         {"mu_k Fourier decay", c6},
      {"regularity", c7},               {"restriction failure", c8},  {"convolution stability", c9},
      {"dimension", c10},               {"formula layer", c11},       {"determinism", c12}};
  bool all = true;
  for (int i : which) {
    auto& [name, f] = criteria[static_cast<std::size_t>(i - 1)];
    std::cout << "C" << i << " " << name << "\n";
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = f();
    } catch (const std::exception& e) {
      info() << "exception: " << e.what() << "\n";
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (pass ? "PASS" : "FAIL") << " C" << i << " " << name << " (" << sec << " s)\n" << std::flush;
    all = all && pass;
  }
  return all ? 0 : 1;
}
