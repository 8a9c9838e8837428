#include "salem/analyze.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace salem {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::int64_t norm_of(const FracIdeal& I) { return to_i64(mp::numerator(ideal_norm(I))); }

std::string rat_str(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

Json vec_json(const Veci& s) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < s.size(); ++i) j.push_back(s(i));
  return j;
}

Json vec_json(const Vecd& s) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < s.size(); ++i) j.push_back(s(i));
  return j;
}

// x in L, with x given exactly.
bool in_lattice(const Lattice64& L, const RatVec& x) {
  std::int64_t y[16];
  const Rational den{Integer(L.den)};
  for (int j = 0; j < L.n; ++j) {
    Rational v = x(j) * den;
    if (mp::denominator(v) != 1) return false;
    y[j] = to_i64(mp::numerator(v));
  }
  return L.contains_numerators(y);
}

// Minimal squared distance between distinct points of a and b, as an integer
// numerator over (den_a den_b)^2. Points of a range over [0,1)^d.
struct SepResult {
  __int128 num = -1;
  std::int64_t den = 1;  // den_a * den_b
  Vecd p, q;
  double dist() const { return num < 0 ? INFINITY : std::sqrt(static_cast<double>(num)) / static_cast<double>(den); }
};

SepResult min_sep_exact(const LatticeView& a, const LatticeView& b) {
  const int d = a.dim();
  const std::int64_t da = a.fast.den, db = b.fast.den;
  SepResult out;
  out.den = da * db;
  const double sa = 1.0 / static_cast<double>(da), sb = 1.0 / static_cast<double>(db);
  for_each_point(a.fast, box_bounds(a.fast, Vecd::Zero(d), Vecd::Ones(d), false), kDefaultPointCap,
                 [&](const std::int64_t* y) {
                   Vecd x(d);
                   for (int j = 0; j < d; ++j) x(j) = static_cast<double>(y[j]) * sa;
                   std::vector<std::int64_t> ya(y, y + d);
                   Vecd lo = x.array() - 1.0, hi = x.array() + 1.0;
                   for_each_point(b.fast, box_bounds(b.fast, lo, hi, true), kDefaultPointCap,
                                  [&](const std::int64_t* z) {
                                    __int128 acc = 0;
                                    for (int j = 0; j < d; ++j) {
                                      __int128 t = static_cast<__int128>(ya[static_cast<std::size_t>(j)]) * db -
                                                   static_cast<__int128>(z[j]) * da;
                                      acc += t * t;
                                    }
                                    if (acc == 0) return;
                                    if (out.num < 0 || acc < out.num) {
                                      out.num = acc;
                                      out.p = x;
                                      out.q.resize(d);
                                      for (int j = 0; j < d; ++j) out.q(j) = static_cast<double>(z[j]) * sb;
                                    }
                                  });
                 });
  return out;
}

Integer to_integer(__int128 x) {
  const bool neg = x < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-x) : static_cast<unsigned __int128>(x);
  Integer v = Integer(static_cast<unsigned long long>(u >> 64));
  v <<= 64;
  v += Integer(static_cast<unsigned long long>(u));
  return neg ? Integer(-v) : v;
}

// C_B^2 dist^2 >= n^{-2/d}, i.e. (C_B^2 dist^2)^d n^2 >= 1, in 50-digit arithmetic.
bool separation_holds(const NumberField& K, const SepResult& r, const Rational& n) {
  if (r.num < 0) return true;
  const Rational d2(to_integer(r.num), Integer(r.den) * Integer(r.den));
  Real lhs = pow(K.C_B_squared() * to_real(d2), K.degree()) * to_real(n * n);
  return lhs >= 1;
}

std::vector<Veci> default_rays(int d) {
  std::vector<Veci> rays;
  for (int i = 0; i < d; ++i) {
    Veci e = Veci::Zero(d);
    e(i) = 1;
    rays.push_back(e);
  }
  rays.push_back(Veci::Ones(d));
  if (d >= 2) {
    const std::vector<std::pair<int, int>> dirs = {{1, -1}, {2, 1}, {1, 2}, {3, 1}, {3, 2}, {5, 2}};
    for (auto [a, b] : dirs) {
      Veci v = Veci::Zero(d);
      v(0) = a;
      v(1) = b;
      rays.push_back(v);
    }
  }
  return rays;
}

}  // namespace

double pstar(double a, double b, int d) {
  if (!(a > 0 && a < d && b > 0 && b < d)) throw DomainError("pstar needs 0 < a, b < d");
  return (4.0 * d - 4.0 * a + 2.0 * b) / b;
}

double p_fail(double tau, double rho, double q, int d) {
  if (!(tau > 1) || !(rho > -d && rho < d) || !(q >= 1)) throw DomainError("p_fail needs tau > 1, -d < rho < d, q >= 1");
  if (q == 1) throw DomainError("p_fail is undefined at q = 1");
  const double rp = std::max(rho, 0.0);
  return q * (d * tau - rho) / ((q - 1) * (d - rp));
}

std::pair<double, double> map_ab_to_taurho(double a, double b, int d) {
  if (!(a > 0 && b > 0 && a < d && b < d)) throw DomainError("map needs 0 < a, b < d");
  if (b > 2 * a) throw DomainError("map needs b <= 2a");
  if (b <= a) return {2.0 * d / a - 1, d * (1 - b / a)};
  return {2.0 * d / b - 1, 2.0 * d * (a / b - 1)};
}

Json ExponentFit::to_json() const {
  Json j;
  j["slope"] = slope;
  j["intercept"] = intercept;
  j["residual"] = residual;
  j["target"] = target;
  j["tolerance"] = tolerance;
  j["direction"] = upper ? "slope <= target + tolerance" : "slope >= target - tolerance";
  j["decades"] = decades;
  j["samples"] = samples.size();
  j["pass"] = pass;
  if (!note.empty()) j["note"] = note;
  return j;
}

ExponentFit fit_exponent(std::vector<std::pair<double, double>> samples, double target, double tolerance, bool upper,
                         double min_decades, std::size_t min_samples) {
  ExponentFit f;
  f.target = target;
  f.tolerance = tolerance;
  f.upper = upper;
  std::sort(samples.begin(), samples.end());
  f.samples = samples;
  if (samples.size() < 2) {
    f.note = "fewer than two finite samples";
    f.slope = f.intercept = f.residual = std::numeric_limits<double>::quiet_NaN();
    return f;
  }
  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : samples) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double r = 0;
  for (auto [x, y] : samples) r += std::pow(y - f.intercept - f.slope * x, 2);
  f.residual = std::sqrt(r / n);
  f.decades = (samples.back().first - samples.front().first) / std::log(10.0);
  const bool enough = samples.size() >= min_samples && f.decades >= min_decades - 1e-12;
  if (!enough) f.note = "needs at least " + std::to_string(min_samples) + " samples over " + std::to_string(min_decades) + " decades";
  f.pass = enough && (upper ? f.slope <= target + tolerance : f.slope >= target - tolerance);
  return f;
}

Json LemmaReport::to_json() const {
  Json j;
  j["lemma"] = id;
  j["instance"] = instance;
  j["computed"] = computed;
  j["bounds"] = bounds;
  j["fitted_constant"] = fitted_constant;
  j["pass"] = pass;
  j["runtime_s"] = runtime;
  j["witnesses"] = witnesses;
  return j;
}

LemmaReport check_formulas(int d, int samples, std::uint64_t seed) {
  const auto t0 = Clock::now();
  LemmaReport r;
  r.id = "formulas";
  r.instance = "d = " + std::to_string(d) + ", " + std::to_string(samples) + " random (a, b)";
  const double p0 = pstar(1, 1, 2);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0;
  int low = 0, high = 0;
  std::ostringstream csv;
  csv.precision(17);
  csv << "a,b,tau,rho,p_fail,pstar,abs_diff\n";
  for (int t = 0; t < samples; ++t) {
    const double a = d * (0.01 + 0.98 * U(rng));
    const double bmax = std::min(2 * a, static_cast<double>(d));
    const double b = bmax * (0.01 + 0.98 * U(rng));
    (b <= a ? low : high)++;
    auto [tau, rho] = map_ab_to_taurho(a, b, d);
    const double pf = p_fail(tau, rho, 2, d), ps = pstar(a, b, d);
    const double diff = std::abs(pf - ps);
    worst = std::max(worst, diff / std::max(1.0, std::abs(ps)));
    csv << a << "," << b << "," << tau << "," << rho << "," << pf << "," << ps << "," << diff << "\n";
  }
  r.computed = {{"pstar_1_1_2", p0}, {"max_rel_diff", worst}, {"branch_b_le_a", low}, {"branch_b_gt_a", high},
                {"p_fail_2_0_2_2", p_fail(2, 0, 2, 2)}};
  r.bounds = {{"pstar_1_1_2", 6}, {"round_trip_tolerance", 1e-12}};
  r.fitted_constant = worst;
  r.pass = std::abs(p0 - 6) <= 1e-12 && worst <= 1e-12 && low > 0 && high > 0;
  r.csv = csv.str();
  r.runtime = seconds_since(t0);
  return r;
}

LemmaReport check_exp_sum(const NumberField& K, std::int64_t norm_bound, std::int64_t s_radius) {
  const auto t0 = Clock::now();
  LemmaReport r;
  r.id = "exp_sum";
  r.instance = "poly " + Json(K.poly_coeffs()).dump() + ", N(I) <= " + std::to_string(norm_bound) + ", |s|_inf <= " +
               std::to_string(s_radius);
  const int d = K.degree();
  std::int64_t hits = 0, zeros = 0, ideals = 0;
  double max_err = 0;
  std::ostringstream csv;
  csv.precision(17);
  csv << "ideal_norm,ideal,hits,zeros,max_error\n";
  for (auto& I : ideals_up_to(K, norm_bound)) {
    ++ideals;
    ExpSumTable tab(K, I);
    std::int64_t h = 0, z = 0;
    double me = 0;
    std::vector<std::int64_t> s(static_cast<std::size_t>(d), -s_radius);
    while (true) {
      ExpSum e = tab(s);
      const double expect = e.indicator ? static_cast<double>(e.norm) : 0.0;
      const double err = std::abs(e.value - cplx(expect, 0));
      (e.indicator ? h : z)++;
      if (err > me) me = err;
      if (err > 1e-9 && r.witnesses.size() < 20)
        r.witnesses.push_back({{"ideal", I.to_string()}, {"s", s}, {"value", {e.value.real(), e.value.imag()}},
                               {"expected", expect}});
      int j = d - 1;
      while (j >= 0 && ++s[static_cast<std::size_t>(j)] > s_radius) s[static_cast<std::size_t>(j--)] = -s_radius;
      if (j < 0) break;
    }
    hits += h;
    zeros += z;
    max_err = std::max(max_err, me);
    csv << tab.norm() << ",\"" << I.to_string() << "\"," << h << "," << z << "," << me << "\n";
  }
  r.computed = {{"ideals", ideals}, {"indicator_true", hits}, {"indicator_false", zeros}, {"max_error", max_err}};
  r.bounds = {{"tolerance", 1e-9}, {"min_branch_hits", 100}};
  r.fitted_constant = max_err;
  r.pass = max_err <= 1e-9 && hits >= 100 && zeros >= 100;
  r.csv = csv.str();
  r.runtime = seconds_since(t0);
  return r;
}

LemmaReport check_ideal_laws(const NumberField& K, std::int64_t norm_bound, std::int64_t p_max, std::uint64_t seed) {
  const auto t0 = Clock::now();
  LemmaReport r;
  r.id = "ideal_laws";
  r.instance = "poly " + Json(K.poly_coeffs()).dump() + ", N(I) <= " + std::to_string(norm_bound) + ", p <= " +
               std::to_string(p_max);
  const int d = K.degree();
  const FracIdeal O = unit_ideal(K);
  auto ideals = ideals_up_to(K, norm_bound);
  std::int64_t mult_ok = 0, mult_bad = 0, inv_ok = 0, inv_bad = 0, quo_ok = 0, quo_bad = 0, prin_ok = 0,
               prin_bad = 0, fac_ok = 0, fac_bad = 0;
  auto fail = [&](const std::string& law, Json detail) {
    if (r.witnesses.size() < 20) r.witnesses.push_back({{"law", law}, {"detail", detail}});
  };
  std::vector<FracIdeal> invs;
  for (auto& I : ideals) invs.push_back(ideal_inverse(K, I));
  for (std::size_t i = 0; i < ideals.size(); ++i) {
    for (std::size_t j = i; j < ideals.size(); ++j) {
      FracIdeal P = ideal_mul(K, ideals[i], ideals[j]);
      if (ideal_norm(P) == ideal_norm(ideals[i]) * ideal_norm(ideals[j])) {
        ++mult_ok;
      } else {
        ++mult_bad;
        fail("multiplicativity", {ideals[i].to_string(), ideals[j].to_string()});
      }
      // Quotient law for I2 = I1 * J inside I1: index from the change of basis.
      const FracIdeal& I1 = ideals[i];
      RatMat X = P.basis() * inverse_exact(I1.basis());
      bool integral = true;
      for (Eigen::Index a = 0; a < X.rows(); ++a)
        for (Eigen::Index b = 0; b < X.cols(); ++b) integral = integral && mp::denominator(X(a, b)) == 1;
      const Rational index = abs(det_exact(X));
      if (integral && ideal_norm(P) / ideal_norm(I1) == index) {
        ++quo_ok;
      } else {
        ++quo_bad;
        fail("quotient", {I1.to_string(), P.to_string(), rat_str(index)});
      }
    }
    // Mixed fractional products.
    FracIdeal F = ideal_mul(K, invs[i], ideals[(i * 7 + 3) % ideals.size()]);
    if (ideal_norm(F) != ideal_norm(invs[i]) * ideal_norm(ideals[(i * 7 + 3) % ideals.size()])) {
      ++mult_bad;
      fail("multiplicativity", {F.to_string()});
    } else {
      ++mult_ok;
    }
    if (ideal_mul(K, ideals[i], invs[i]) == O) {
      ++inv_ok;
    } else {
      ++inv_bad;
      fail("inverse", ideals[i].to_string());
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-9, 9), dens(1, 6);
  for (int t = 0; t < 200; ++t) {
    RatVec c(d);
    bool nz = false;
    for (int j = 0; j < d; ++j) {
      c(j) = Rational(Integer(coef(rng)), Integer(dens(rng)));
      nz = nz || c(j) != 0;
    }
    if (!nz) continue;
    FieldElement q(c);
    Rational a = ideal_norm(ideal_from_generators(K, {q}));
    Rational b = abs(elem_norm(K, q));
    if (a == b) {
      ++prin_ok;
    } else {
      ++prin_bad;
      fail("principal_norm", {rat_str(a), rat_str(b)});
    }
  }
  for (std::int64_t p = 2; p <= p_max; ++p) {
    bool prime = true;
    for (std::int64_t q = 2; q * q <= p; ++q) prime = prime && p % q != 0;
    if (!prime) continue;
    auto recs = prime_ideals_above(K, p);
    FracIdeal prod = O;
    int ef = 0;
    for (auto& rec : recs) {
      for (int e = 0; e < rec.e; ++e) prod = ideal_mul(K, prod, rec.ideal);
      ef += rec.e * rec.f;
    }
    RatVec pv = RatVec::Zero(d);
    pv(0) = Rational(p);
    const FracIdeal pO = ideal_from_generators(K, {FieldElement(pv)});
    if (prod == pO && ef == d) {
      ++fac_ok;
    } else {
      ++fac_bad;
      fail("factorization", {{"p", p}, {"sum_ef", ef}});
    }
  }
  r.computed = {{"multiplicativity", {mult_ok, mult_bad}}, {"inverse", {inv_ok, inv_bad}},
                {"quotient", {quo_ok, quo_bad}},         {"principal_norm", {prin_ok, prin_bad}},
                {"factorization", {fac_ok, fac_bad}}};
  r.bounds = {{"tolerance", "exact"}};
  r.pass = mult_bad + inv_bad + quo_bad + prin_bad + fac_bad == 0 && mult_ok > 0 && fac_ok > 0;
  r.runtime = seconds_since(t0);
  return r;
}

LemmaReport check_crt(const NumberField& K, std::int64_t norm_bound, int trials, std::uint64_t seed) {
  const auto t0 = Clock::now();
  LemmaReport r;
  r.id = "crt";
  r.instance = "poly " + Json(K.poly_coeffs()).dump() + ", prime pairs N <= " + std::to_string(norm_bound) +
               ", D in {O_K, delta^{-1}}, " + std::to_string(trials) + " coset pairs";
  const int d = K.degree();
  auto primes = prime_ideals_up_to(K, norm_bound);
  const std::vector<std::pair<std::string, FracIdeal>> Ds = {{"O_K", unit_ideal(K)},
                                                             {"delta^-1", ideal_inverse(K, different_ideal(K))}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-6, 6);
  std::int64_t cases = 0, empty = 0, nonempty = 0, bad = 0, residues = 0;
  for (auto& [dname, D] : Ds) {
    const RatMat DB = D.basis();
    for (std::size_t i = 0; i < primes.size(); ++i) {
      for (std::size_t j = i; j < primes.size(); ++j) {
        const FracIdeal& I1 = primes[i].ideal;
        const FracIdeal& I2 = primes[j].ideal;
        FracIdeal DI1 = ideal_mul(K, D, I1), DI2 = ideal_mul(K, D, I2);
        FracIdeal L = ideal_intersect(DI1, DI2);
        Lattice64 f1(DI1.lattice()), f2(DI2.lattice()), fL(L.lattice());
        Vecd diag(d);
        for (int c = 0; c < d; ++c) diag(c) = to_double(Rational(L.hnf()(c, c), L.den()));
        auto reps = points_in_box(D, Vecd::Zero(d), diag);
        residues += static_cast<std::int64_t>(reps.size());
        const Rational expect_count = ideal_norm(L) / ideal_norm(D);
        if (Rational(static_cast<long long>(reps.size())) != expect_count) {
          ++bad;
          r.witnesses.push_back({{"D", dname}, {"I1", I1.to_string()}, {"I2", I2.to_string()},
                                 {"issue", "residue count differs from [D:L]"}});
          continue;
        }
        for (int t = 0; t < trials; ++t) {
          RatVec c1 = RatVec::Zero(d), c2 = RatVec::Zero(d);
          for (int a = 0; a < d; ++a) {
            c1 += Rational(coef(rng)) * RatVec(DB.row(a).transpose());
            c2 += Rational(coef(rng)) * RatVec(DB.row(a).transpose());
          }
          if (t == 0) c2 = c1;
          FieldElement a1(c1), a2(c2);
          std::vector<RatVec> S;
          for (auto& x : reps) {
            if (in_lattice(f1, RatVec(x.coords - c1)) && in_lattice(f2, RatVec(x.coords - c2))) S.push_back(x.coords);
          }
          auto out = crt_intersect_cosets(K, D, I1, I2, a1, a2);
          ++cases;
          bool ok;
          if (!out) {
            ok = S.empty();
            ++empty;
          } else {
            ++nonempty;
            ok = S.size() == 1 && out->L == L && in_lattice(fL, RatVec(out->a.coords - S[0])) &&
                 D.contains(out->a);
          }
          if (!ok) {
            ++bad;
            if (r.witnesses.size() < 20)
              r.witnesses.push_back({{"D", dname},
                                     {"I1", I1.to_string()},
                                     {"I2", I2.to_string()},
                                     {"brute_force_cosets", S.size()},
                                     {"crt_empty", !out.has_value()}});
          }
        }
      }
    }
  }
  r.computed = {{"cases", cases}, {"empty", empty}, {"nonempty", nonempty}, {"residues_enumerated", residues},
                {"mismatches", bad}};
  r.bounds = {{"tolerance", "exact"}};
  r.pass = bad == 0 && empty > 0 && nonempty > 0;
  r.runtime = seconds_since(t0);
  return r;
}

LemmaReport check_separation(const NumberField& K, std::int64_t norm_bound) {
  const auto t0 = Clock::now();
  LemmaReport r;
  r.id = "separation";
  r.instance = "poly " + Json(K.poly_coeffs()).dump() + ", all pairs with N(I) <= " + std::to_string(norm_bound);
  auto ideals = ideals_up_to(K, norm_bound);
  std::vector<LatticeView> inv;
  for (auto& I : ideals) inv.emplace_back(ideal_inverse(K, I));
  std::int64_t pairs = 0, bad = 0;
  double min_ratio = INFINITY;
  std::ostringstream csv;
  csv.precision(17);
  csv << "norm1,norm2,norm_intersection,min_distance,bound\n";
  const int d = K.degree();
  for (std::size_t i = 0; i < ideals.size(); ++i) {
    for (std::size_t j = i; j < ideals.size(); ++j) {
      const Rational n = ideal_norm(ideal_intersect(ideals[i], ideals[j]));
      SepResult s = min_sep_exact(inv[i], inv[j]);
      const double bound = std::pow(to_double(n), -1.0 / d) / K.C_B();
      ++pairs;
      const bool ok = separation_holds(K, s, n);
      min_ratio = std::min(min_ratio, s.dist() / bound);
      csv << norm_of(ideals[i]) << "," << norm_of(ideals[j]) << "," << n << "," << s.dist() << "," << bound << "\n";
      if (!ok) {
        ++bad;
        if (r.witnesses.size() < 20)
          r.witnesses.push_back({{"I1", ideals[i].to_string()}, {"I2", ideals[j].to_string()},
                                 {"r1", vec_json(s.p)}, {"r2", vec_json(s.q)}, {"distance", s.dist()},
                                 {"bound", bound}});
      }
    }
  }
  r.computed = {{"pairs", pairs}, {"violations", bad}, {"min_distance_over_bound", min_ratio}};
  r.bounds = {{"inequality", "C_B |r1 - r2| >= N(I1 cap I2)^{-1/d}"}};
  r.fitted_constant = min_ratio;
  r.pass = bad == 0;
  r.csv = csv.str();
  r.runtime = seconds_since(t0);
  return r;
}

LemmaReport check_separation_facts(const Construction& C, int k) {
  const auto t0 = Clock::now();
  const Level& L = C.level(k);
  const NumberField& K = C.field();
  const int d = C.dim();
  LemmaReport r;
  r.id = "separation_facts";
  r.instance = "level " + std::to_string(k) + ", M = " + std::to_string(L.M);
  bool pass = true;
  // (a) J self-separation.
  if (L.J) {
    LatticeView v(ideal_inverse(K, L.J->ideal));
    SepResult s = min_sep_exact(v, v);
    const bool ok = separation_holds(K, s, ideal_norm(L.J->ideal));
    const double c = s.dist() * std::pow(L.M, 1 + C.rho() / d);
    r.computed["J_self_separation"] = {{"min_distance", s.dist()}, {"constant", c}, {"lemma_bound_holds", ok}};
    pass = pass && ok;
  }
  // (b) Q(M_k) pairwise, and (c) coincidences only at integer points.
  double qmin = INFINITY;
  bool qok = true, cok = true;
  const auto& src = L.sources;
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = i; j < src.size(); ++j) {
      SepResult s = min_sep_exact(src[i].inv, src[j].inv);
      const Rational n = ideal_norm(ideal_intersect(src[i].ideal, src[j].ideal));
      if (!separation_holds(K, s, n)) {
        qok = false;
        if (r.witnesses.size() < 20)
          r.witnesses.push_back({{"I1", src[i].ideal.to_string()}, {"I2", src[j].ideal.to_string()},
                                 {"distance", s.dist()}});
      }
      if (src[i].in_Q && src[j].in_Q) qmin = std::min(qmin, s.dist());
      if (i != j) {
        const FracIdeal common = ideal_intersect(ideal_inverse(K, src[i].ideal), ideal_inverse(K, src[j].ideal));
        for (auto& x : points_in_box(common, Vecd::Zero(d), Vecd::Ones(d))) {
          for (int c = 0; c < d; ++c) cok = cok && mp::denominator(x.coords(c)) == 1;
        }
      }
    }
  }
  // Distance from Z^d to supp(phi0) = [1/8, 3/8]^d.
  double zdist = INFINITY;
  for (int m = -1; m <= 1; ++m) {
    Vecd z = Vecd::Constant(d, static_cast<double>(m));
    Vecd p = z.cwiseMax(Vecd::Constant(d, 0.125)).cwiseMin(Vecd::Constant(d, 0.375));
    zdist = std::min(zdist, (z - p).norm());
  }
  const bool away = zdist > 3 * L.eta;
  r.computed["Q_pairwise"] = {{"min_distance", qmin}, {"constant", qmin * L.M * L.M}, {"lemma_bound_holds", qok}};
  r.computed["coincidence"] = {{"common_points_integral", cok}, {"dist_Zd_to_supp_phi0", zdist},
                               {"three_eta", 3 * L.eta}, {"holds", away}};
  r.bounds = {{"a", "|r1 - r2| >~ M^{-1-rho/d} on J^{-1}"}, {"b", "|r1 - r2| >~ M^{-2} on Q(M)"},
              {"c", "common points lie in Z^d at distance > 3 eta from supp(phi0)"}};
  r.fitted_constant = qmin * L.M * L.M;
  r.pass = pass && qok && cok && away;
  r.runtime = seconds_since(t0);
  return r;
}

LemmaReport landau_check(const NumberField& K, const std::vector<double>& Ms, double lo, double hi) {
  const auto t0 = Clock::now();
  LemmaReport r;
  r.id = "landau";
  r.instance = "poly " + Json(K.poly_coeffs()).dump();
  const int d = K.degree();
  bool pass = true;
  Json rows = Json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "M,count,ratio\n";
  for (double M : Ms) {
    const auto Q = enumerate_Q(K, M);
    const double ratio = static_cast<double>(Q.size()) * std::log(M) / std::pow(M, d);
    const bool checked = M >= 8;
    const bool ok = !checked || (ratio >= lo && ratio <= hi);
    pass = pass && ok;
    rows.push_back({{"M", M}, {"count", Q.size()}, {"ratio", ratio}, {"checked", checked}, {"ok", ok}});
    csv << M << "," << Q.size() << "," << ratio << "\n";
  }
  r.computed["rows"] = rows;
  r.bounds = {{"bracket", {lo, hi}}, {"applies_from_M", 8}};
  r.pass = pass;
  r.csv = csv.str();
  r.runtime = seconds_since(t0);
  return r;
}

LemmaReport check_Fk_spectrum(const Construction& C, int k, std::int64_t s_radius, int quad_samples,
                              std::uint64_t seed) {
  const auto t0 = Clock::now();
  const Level& L = C.level(k);
  const int d = C.dim();
  LemmaReport r;
  r.id = "Fk_spectrum";
  r.instance = "level " + std::to_string(k) + ", M = " + std::to_string(L.M) + ", rho = " + std::to_string(C.rho());
  // F-1*
  const double f0 = C.Fk_hat(k, Veci::Zero(d));
  const bool one = std::abs(f0 - 1) <= 1e-12;
  // F-3*: exact vanishing annulus.
  const double Ra = L.annulus_radius;
  const std::int64_t ra = static_cast<std::int64_t>(std::floor(Ra));
  std::int64_t ann_pts = 0, ann_bad = 0;
  {
    Veci s = Veci::Constant(d, -ra);
    while (true) {
      const double n2 = static_cast<double>(s.squaredNorm());
      if (n2 > 0 && n2 <= Ra * Ra) {
        ++ann_pts;
        if (C.spectral_weight(k, s) != 0) {
          ++ann_bad;
          if (r.witnesses.size() < 20) r.witnesses.push_back({{"annulus_nonzero", vec_json(s)}});
        }
      }
      int j = d - 1;
      while (j >= 0 && ++s(j) > ra) s(j--) = -ra;
      if (j < 0) break;
    }
  }
  // F-2*, F-4*, F-5* on a full box plus random far samples.
  std::mt19937_64 rng(seed);
  const double Mt = std::pow(L.M, 1 + C.tau());
  double fmax = 0, c4 = 0, c5 = 0;
  std::int64_t tested = 0;
  auto visit = [&](const Veci& s) {
    const double v = std::abs(C.Fk_hat(k, s));
    ++tested;
    fmax = std::max(fmax, v);
    const double n = std::sqrt(static_cast<double>(s.squaredNorm()));
    if (v > 1 + 1e-12 && r.witnesses.size() < 20) r.witnesses.push_back({{"exceeds_one", vec_json(s)}, {"value", v}});
    if (n >= Ra && n > 1) c4 = std::max(c4, v / (std::pow(L.M, -d + C.rho_plus()) * std::log(n)));
    if (n >= Mt) c5 = std::max(c5, v / std::pow(Mt / n, C.schwartz_order()));
  };
  {
    Veci s = Veci::Constant(d, -s_radius);
    while (true) {
      visit(s);
      int j = d - 1;
      while (j >= 0 && ++s(j) > s_radius) s(j--) = -s_radius;
      if (j < 0) break;
    }
  }
  const std::int64_t far = static_cast<std::int64_t>(std::ceil(4 * Mt));
  std::uniform_int_distribution<std::int64_t> U(-far, far);
  for (int t = 0; t < 20000; ++t) {
    Veci s(d);
    for (int j = 0; j < d; ++j) s(j) = U(rng);
    visit(s);
  }
  // Lattice points carry the nonzero values: sample them too.
  std::uniform_int_distribution<std::size_t> pick(0, L.sources.size() - 1);
  std::uniform_int_distribution<int> cc(-8, 8);
  auto lattice_sample = [&](double box) {
    while (true) {
      const Source& src = L.sources[pick(rng)];
      Veci s = Veci::Zero(d);
      for (int a = 0; a < d; ++a) {
        const int c = cc(rng);
        for (int b = 0; b < d; ++b) s(b) += c * src.spectral.at(a, b);
      }
      if (static_cast<double>(s.cwiseAbs().maxCoeff()) <= box) return s;
    }
  };
  for (int t = 0; t < 5000; ++t) visit(lattice_sample(4 * Mt));
  // Closed form vs quadrature.
  std::vector<Veci> qs;
  const double qbox = 0.5 * Mt;
  std::uniform_int_distribution<std::int64_t> Uq(-static_cast<std::int64_t>(qbox), static_cast<std::int64_t>(qbox));
  for (int t = 0; t < quad_samples; ++t) {
    if (t % 2 == 0) {
      qs.push_back(lattice_sample(qbox));
    } else {
      Veci s(d);
      for (int j = 0; j < d; ++j) s(j) = Uq(rng);
      qs.push_back(s);
    }
  }
  auto quad = C.Fk_hat_quadrature(k, qs);
  double qdiff = 0;
  std::ostringstream csv;
  csv.precision(17);
  for (int j = 0; j < d; ++j) csv << "s" << j + 1 << ",";
  csv << "closed_form,quadrature_re,quadrature_im,abs_diff\n";
  for (std::size_t t = 0; t < qs.size(); ++t) {
    const double cf = C.Fk_hat(k, qs[t]);
    const double diff = std::abs(quad[t] - cplx(cf, 0));
    qdiff = std::max(qdiff, diff);
    for (int j = 0; j < d; ++j) csv << qs[t](j) << ",";
    csv << cf << "," << quad[t].real() << "," << quad[t].imag() << "," << diff << "\n";
    if (diff > 1e-7 && r.witnesses.size() < 20)
      r.witnesses.push_back({{"quadrature_mismatch", vec_json(qs[t])}, {"closed_form", cf}, {"diff", diff}});
  }
  r.computed = {{"Fhat0", f0},
                {"annulus_radius", Ra},
                {"annulus_points", ann_pts},
                {"annulus_nonzero", ann_bad},
                {"tested_points", tested},
                {"max_abs_Fhat", fmax},
                {"F4_constant", c4},
                {"F5_constant", c5},
                {"quadrature_points", qs.size()},
                {"quadrature_max_diff", qdiff}};
  r.bounds = {{"F1", "Fhat(0) = 1 to 1e-12"}, {"F2", "|Fhat| <= 1"}, {"F3", "exact zero on 0 < |s| <= C0 M^{1-rho^-/d}"},
              {"F4", "|Fhat| <= C M^{-d+rho^+} log|s| (fitted)"}, {"F5", "|Fhat| <= C (M^{1+tau}/|s|)^N (fitted)"},
              {"quadrature_tolerance", 1e-7}};
  r.fitted_constant = c4;
  r.pass = one && ann_bad == 0 && ann_pts > 0 && fmax <= 1 + 1e-12 && qdiff <= 1e-7;
  r.csv = csv.str();
  r.runtime = seconds_since(t0);
  return r;
}

LemmaReport check_measure(const Construction& C, int k, int samples, std::uint64_t seed) {
  const auto t0 = Clock::now();
  const int d = C.dim();
  LemmaReport r;
  r.id = "measure";
  r.instance = "levels 0.." + std::to_string(k);
  bool pass = true;
  Json masses = Json::array();
  for (int j = 0; j <= k; ++j) {
    const double m = C.total_mass(j);
    const bool ok = m >= 0.5 && m <= 1.5;
    masses.push_back({{"k", j}, {"mass", m}, {"in_bracket", ok}});
    if (j >= 1) {
      const double bm = C.ball_mass(j, Vecd::Constant(d, 0.25), 0.125);
      masses.back()["ball_mass_of_support"] = bm;
    }
  }
  r.computed["total_mass"] = masses;
  const double mk = masses.back()["mass"].get<double>();
  pass = pass && mk >= 0.5 && mk <= 1.5;
  std::mt19937_64 rng(seed);
  const double Mt = k >= 1 ? std::pow(C.M(k), 1 + C.tau()) : 64;
  std::uniform_int_distribution<std::int64_t> U(-static_cast<std::int64_t>(Mt), static_cast<std::int64_t>(Mt));
  double sym = 0;
  for (int t = 0; t < samples; ++t) {
    Veci s(d);
    for (int j = 0; j < d; ++j) s(j) = U(rng);
    const cplx a = C.mu_hat_direct(k, s), b = C.mu_hat_direct(k, Veci(-s));
    sym = std::max(sym, std::abs(a - std::conj(b)));
  }
  r.computed["conjugate_symmetry_max_diff"] = sym;
  pass = pass && sym <= 1e-12;
  // (mu-2): mu_k close to mu_{k-1} inside the annulus.
  if (k >= 1) {
    const double R = C.level(k).annulus_radius / 2;
    const std::int64_t ri = static_cast<std::int64_t>(std::floor(R));
    double diff = 0;
    Veci s = Veci::Constant(d, -ri);
    while (true) {
      if (static_cast<double>(s.squaredNorm()) <= R * R)
        diff = std::max(diff, std::abs(C.mu_hat_direct(k, s) - C.mu_hat_direct(k - 1, s)));
      int j = d - 1;
      while (j >= 0 && ++s(j) > ri) s(j--) = -ri;
      if (j < 0) break;
    }
    const double M = C.M(k);
    r.computed["mu2"] = {{"radius", R}, {"max_diff", diff},
                         {"constant", diff / (std::pow(M, -(C.schwartz_order() - 2 * d)) * std::log(M))}};
  }
  r.bounds = {{"mass_bracket", {0.5, 1.5}}, {"conjugate_symmetry", 1e-12}};
  r.pass = pass;
  r.runtime = seconds_since(t0);
  return r;
}

Json DecayResult::to_json() const {
  Json j;
  j["fit"] = fit.to_json();
  j["oracle"] = {{"points", oracle_points}, {"max_diff", oracle_max_diff}, {"tail_bound", oracle_tail},
                 {"tolerance", 1e-6}, {"pass", oracle_pass}};
  return j;
}

DecayResult decay_scan(const Construction& C, int k, const DecayOptions& opt) {
  const int d = C.dim();
  DecayResult out;
  const double Mk = C.M(k);
  const double s_min = opt.s_min > 0 ? opt.s_min : std::max(2.0, Mk);
  const double s_max = opt.s_max > 0 ? opt.s_max : 4 * std::pow(Mk, 1 + C.tau());
  if (!(s_max > s_min)) throw DomainError("decay range is empty");
  std::vector<Veci> rays = opt.rays.empty() ? default_rays(d) : opt.rays;
  if (k >= 1 && C.level(k).J && opt.rays.empty()) {
    // Shortest row of the J spectral lattice: the sparse sublattice's worst direction.
    const Lattice64& S = std::find_if(C.level(k).sources.begin(), C.level(k).sources.end(),
                                      [](const Source& s) { return s.is_J; })->spectral;
    Veci best;
    double bn = INFINITY;
    for (int a = 0; a < d; ++a) {
      Veci v(d);
      for (int b = 0; b < d; ++b) v(b) = S.at(a, b);
      const double n = std::sqrt(static_cast<double>(v.squaredNorm()));
      if (n < bn) {
        bn = n;
        best = v;
      }
    }
    rays.push_back(best);
  }
  std::ostringstream csv;
  csv.precision(17);
  csv << "ray,radius_index,";
  for (int j = 0; j < d; ++j) csv << "s" << j + 1 << ",";
  csv << "abs_s,abs_mu_hat\n";
  // Per radius, the sample with the largest |mu_hat| / log|s| over all rays.
  std::vector<std::pair<double, double>> best(static_cast<std::size_t>(opt.radii), {0.0, 0.0});
  std::set<std::vector<std::int64_t>> seen;
  for (std::size_t ri = 0; ri < rays.size(); ++ri) {
    const Vecd dir = rays[ri].cast<double>() / std::sqrt(static_cast<double>(rays[ri].squaredNorm()));
    for (int i = 0; i < opt.radii; ++i) {
      const double t = s_min * std::pow(s_max / s_min, static_cast<double>(i) / (opt.radii - 1));
      Veci s(d);
      for (int j = 0; j < d; ++j) s(j) = static_cast<std::int64_t>(std::llround(t * dir(j)));
      if (!seen.insert(std::vector<std::int64_t>(s.data(), s.data() + d)).second) continue;
      const double n = std::sqrt(static_cast<double>(s.squaredNorm()));
      if (n <= 1) continue;
      const double v = std::abs(C.mu_hat_direct(k, s));
      csv << ri << "," << i << ",";
      for (int j = 0; j < d; ++j) csv << s(j) << ",";
      csv << n << "," << v << "\n";
      auto& b = best[static_cast<std::size_t>(i)];
      if (v / std::log(n) > b.second) b = {n, v / std::log(n)};
    }
  }
  std::vector<std::pair<double, double>> samples;
  for (auto [n, y] : best)
    if (y > 0) samples.emplace_back(std::log(n), std::log(y));
  const double target = -(d - C.rho_plus()) / (1 + C.tau());
  out.fit = fit_exponent(samples, target, 0.15, true);
  if (samples.empty()) out.fit.note = "mu_hat vanishes at every sampled frequency";
  // Recursive route vs direct oracle.
  std::mt19937_64 rng(opt.seed);
  const double tm = opt.t_max > 0 ? opt.t_max : 2 * std::pow(C.M(k == 1 ? 1 : k - 1), 1 + C.tau());
  const std::int64_t box = static_cast<std::int64_t>(std::min(s_max / 4, 4 * std::pow(Mk, 1 + C.tau()) / 4));
  std::uniform_int_distribution<std::int64_t> U(-box, box);
  out.oracle_points = opt.oracle_points;
  for (int t = 0; t < opt.oracle_points; ++t) {
    Veci s(d);
    for (int j = 0; j < d; ++j) s(j) = U(rng);
    MuHat rec = C.mu_hat(k, s, tm);
    const cplx dir = C.mu_hat_direct(k, s);
    out.oracle_max_diff = std::max(out.oracle_max_diff, std::abs(rec.value - dir));
    out.oracle_tail = std::max(out.oracle_tail, rec.certified ? rec.tail_bound : 0.0);
  }
  out.oracle_pass = out.oracle_max_diff <= 1e-6;
  out.csv = csv.str();
  return out;
}

Json RegularityResult::to_json() const {
  Json j;
  j["fit"] = fit.to_json();
  j["kball"] = kball.to_json();
  return j;
}

RegularityResult regularity_scan(const Construction& C, int k, int radii, int centers) {
  const auto t0 = Clock::now();
  const int d = C.dim();
  const Level& L = C.level(k);
  RegularityResult out;
  const double rlo = L.eta, rhi = std::pow(C.M(k - 1), -(1 + C.tau()));
  std::vector<std::string> notes;
  auto pts = C.sample_support(k, centers, &notes);
  std::ostringstream csv;
  csv.precision(17);
  csv << "radius,center_index,mass\n";
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < radii; ++i) {
    const double rad = rlo * std::pow(rhi / rlo, static_cast<double>(i) / (radii - 1));
    double best = 0;
    for (std::size_t c = 0; c < pts.size(); ++c) {
      const double m = C.ball_mass(k, pts[c], rad);
      csv << rad << "," << c << "," << m << "\n";
      best = std::max(best, m);
    }
    if (best > 0) samples.emplace_back(std::log(rad), std::log(best / std::pow(std::log(1 / rad), 2)));
  }
  const double target = (2.0 * d - C.rho_minus()) / (1 + C.tau());
  out.fit = fit_exponent(samples, target, 0.15, false, 0.0, 20);
  if (!notes.empty()) out.fit.note += (out.fit.note.empty() ? "" : "; ") + notes.front();
  out.csv = csv.str();

  // k-ball bounds.
  LemmaReport& kb = out.kball;
  kb.id = "kball";
  kb.instance = "level " + std::to_string(k) + ", M = " + std::to_string(L.M);
  const double M = L.M, Mp = C.M(k - 1), lg = std::log(M);
  const double b3 = lg * lg * std::pow(M, -2.0 * d + C.rho_minus());
  const double b1 = lg * lg * std::pow(M, -2.0 * d);
  const double b2 = std::pow(std::log(Mp), 2) * std::pow(Mp, d * (C.tau() - 1) + C.rho_minus()) /
                    static_cast<double>(L.Q.size()) * std::pow(M, -d);
  std::set<std::vector<double>> seen;
  const LatticeView* Jinv = nullptr;
  for (auto& s : L.sources)
    if (s.is_J) Jinv = &s.inv;
  double c1 = 0, c2 = 0, c3 = 0;
  std::int64_t balls = 0, far_balls = 0;
  for (auto& a : C.atoms(k)) {
    const Vecd& r = a.centers.back();
    if (!seen.insert(std::vector<double>(r.data(), r.data() + d)).second) continue;
    ++balls;
    const double m = C.ball_mass(k, r, L.eta);
    c3 = std::max(c3, m / b3);
    c2 = std::max(c2, m / b2);
    bool far = true;
    if (Jinv) {
      Vecd lo = r.array() - 3 * L.eta, hi = r.array() + 3 * L.eta;
      far = points_in_box(*Jinv, lo, hi, false).empty();
    }
    if (far) {
      ++far_balls;
      c1 = std::max(c1, m / b1);
    }
  }
  kb.computed = {{"balls", balls}, {"balls_far_from_J", far_balls}, {"C1", c1}, {"C2", c2}, {"C3", c3}};
  kb.bounds = {{"mu(B)-1", b1}, {"mu(B)-2", b2}, {"mu(B)-3", b3}};
  kb.fitted_constant = c3;
  kb.pass = balls > 0 && std::isfinite(c1) && std::isfinite(c2) && std::isfinite(c3);
  kb.runtime = seconds_since(t0);
  return out;
}

std::vector<Veci> S_Jk(const Construction& C, int k) {
  const Level& L = C.level(k);
  if (!L.J) throw DomainError("S(J_k) needs an odd level");
  const int d = C.dim();
  const Source* J = nullptr;
  for (auto& s : L.sources)
    if (s.is_J) J = &s;
  const double R = C.bump().c_lower() * std::pow(L.M, 1 + C.tau());
  BoxBounds bb;
  const std::int64_t ri = static_cast<std::int64_t>(std::floor(R));
  for (int j = 0; j < d; ++j) {
    bb.lo.push_back(-ri);
    bb.hi.push_back(ri);
  }
  std::vector<Veci> out;
  for_each_point(J->spectral, bb, 50'000'000, [&](const std::int64_t* y) {
    Veci s(d);
    for (int j = 0; j < d; ++j) s(j) = y[j];
    if (static_cast<double>(s.squaredNorm()) <= R * R) out.push_back(s);
  });
  return out;
}

double hausdorff_cover_sum(const NumberField& K, double s_exp, double tau, std::int64_t lo_norm,
                           std::int64_t norm_bound) {
  if (norm_bound < 2) return 0;
  const int d = K.degree();
  auto counts = ideal_norm_counts(K, norm_bound);
  const double e = 1 - s_exp * (1 + tau) / d;
  double sum = 0;
  for (std::int64_t n = std::max<std::int64_t>(lo_norm + 1, 1); n <= norm_bound; ++n)
    sum += static_cast<double>(counts[static_cast<std::size_t>(n)]) * std::pow(static_cast<double>(n), e);
  return sum;
}

LemmaReport dimension_report(const NumberField& K, double tau, const std::vector<std::int64_t>& norm_bounds,
                             double offset) {
  const auto t0 = Clock::now();
  const int d = K.degree();
  LemmaReport r;
  r.id = "dimension";
  const double s0 = 2.0 * d / (1 + tau);
  r.instance = "tau = " + std::to_string(tau) + ", threshold 2d/(1+tau) = " + std::to_string(s0);
  std::ostringstream csv;
  csv.precision(17);
  csv << "s,norm_bound,block_sum\n";
  auto blocks = [&](double s) {
    std::vector<double> v;
    for (auto B : norm_bounds) {
      const double b = hausdorff_cover_sum(K, s, tau, B / 10, B);
      v.push_back(b);
      csv << s << "," << B << "," << b << "\n";
    }
    return v;
  };
  const auto above = blocks(s0 + offset), below = blocks(s0 - offset);
  bool dec = true, nondec = true;
  for (std::size_t i = 1; i < above.size(); ++i) dec = dec && above[i] < above[i - 1];
  for (std::size_t i = 1; i < below.size(); ++i) nondec = nondec && below[i] >= below[i - 1];
  r.computed = {{"s_above", s0 + offset}, {"blocks_above", above}, {"s_below", s0 - offset}, {"blocks_below", below},
                {"block", "sum over (B/10, B]"}};
  r.bounds = {{"above", "strictly decreasing"}, {"below", "not decreasing"}};
  r.pass = dec && nondec && above.size() >= 2;
  r.csv = csv.str();
  r.runtime = seconds_since(t0);
  return r;
}

LemmaReport support_membership(const Construction& C, int k, int count, std::int64_t norm_bound) {
  const auto t0 = Clock::now();
  LemmaReport r;
  r.id = "support_membership";
  r.instance = "level " + std::to_string(k) + ", normBound " + std::to_string(norm_bound);
  std::vector<std::string> notes;
  auto pts = C.sample_support(k, count, &notes);
  EMembershipTester tester(C.field(), C.tau(), norm_bound, 3, 2);
  std::ostringstream csv;
  csv.precision(17);
  const int d = C.dim();
  for (int j = 0; j < d; ++j) csv << "x" << j + 1 << ",";
  csv << "witnesses,member,witness_in_Q\n";
  int members = 0;
  for (auto& x : pts) {
    EMembership m = tester(x);
    bool inq = false;
    if (k >= 1) {
      for (auto& w : m.witnesses)
        for (auto& q : C.level(k).Q) inq = inq || w.norm == q.norm;
    }
    members += m.member;
    for (int j = 0; j < d; ++j) csv << x(j) << ",";
    csv << m.witnesses.size() << "," << m.member << "," << inq << "\n";
    if (!m.member && r.witnesses.size() < 20) r.witnesses.push_back({{"x", vec_json(x)}, {"witnesses", m.witnesses.size()}});
  }
  r.computed = {{"points", pts.size()}, {"members", members}, {"notes", notes}};
  r.bounds = {{"min_witnesses", 3}, {"min_norm", 2}, {"norm_bound", norm_bound}};
  r.pass = static_cast<int>(pts.size()) == count && members == count;
  r.csv = csv.str();
  r.runtime = seconds_since(t0);
  return r;
}

}  // namespace salem
