#include "salem/analyze.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace salem {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

int gl_order(double s, double L) {
  const double need = M_PI * std::abs(s) * L + 64;
  int n = 64;
  while (n < need && n < 8192) n *= 2;
  return n;
}

const Source& j_source(const Level& L) {
  for (auto& s : L.sources)
    if (s.is_J) return s;
  throw DomainError("level " + std::to_string(L.k) + " has no J source; restriction needs odd k");
}

// |z|^p from |z|^2 without pow for the common odd integers.
double abs_pow(double z2, double p) {
  if (p == 3) return z2 * std::sqrt(z2);
  if (p == 5) return z2 * z2 * std::sqrt(z2);
  if (p == 2) return z2;
  if (p == 4) return z2 * z2;
  return std::pow(z2, 0.5 * p);
}

}  // namespace

JMeasure::JMeasure(const Construction& C, int k) : C_(&C) {
  const Level& L = C.level(k);
  const Source& J = j_source(L);
  eta_ = L.eta;
  for (auto& a : C.atoms(k)) {
    Vecd lo = a.lo.array() - eta_, hi = a.hi.array() + eta_;
    auto pts = points_in_box(J.inv, lo, hi, true);
    for (auto& r : pts) {
      Term t;
      t.weight = a.weight;
      t.lo = a.lo.cwiseMax(Vecd(r.array() - eta_));
      t.hi = a.hi.cwiseMin(Vecd(r.array() + eta_));
      if ((t.hi - t.lo).minCoeff() <= 0) continue;
      t.centers = a.centers;
      t.etas = a.etas;
      t.jcenter = r;
      terms_.push_back(std::move(t));
    }
    if (pts.size() > 1) {
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
          if ((pts[i] - pts[j]).cwiseAbs().maxCoeff() < 2 * eta_)
            throw DomainError("overlapping J balls: powers of Phi_J are not termwise");
    }
  }
}

double JMeasure::factor(const Term& t, int i, double x, double qpow) const {
  const BumpFamily& b = C_->bump();
  double v = b.phi0_1d(x);
  for (std::size_t j = 0; j < t.etas.size() && v != 0; ++j) v *= b.phi1().eval((x - t.centers[j](i)) / t.etas[j]);
  if (v == 0) return 0;
  const double f = b.phi1().eval((x - t.jcenter(i)) / eta_);
  return v * (qpow == 1 ? f : std::pow(f, qpow));
}

cplx JMeasure::hat(const Vecd& xi) const {
  const int d = C_->dim();
  const double scale = std::pow(eta_, -d);
  cplx total = 0;
  for (auto& t : terms_) {
    cplx term = t.weight * scale;
    for (int i = 0; i < d && term != cplx(0); ++i) {
      const double lo = t.lo(i), hi = t.hi(i);
      const GaussRule& g = gauss_legendre(gl_order(xi(i), hi - lo));
      const double h = 0.5 * (hi - lo), c = 0.5 * (hi + lo);
      cplx acc = 0;
      for (std::size_t q = 0; q < g.x.size(); ++q) {
        const double x = c + h * g.x[q];
        const double v = factor(t, i, x, 1);
        if (v != 0) acc += g.w[q] * v * std::polar(1.0, -kTwoPi * x * xi(i));
      }
      term *= acc * h;
    }
    total += term;
  }
  return total;
}

double JMeasure::moment(double q) const {
  const int d = C_->dim();
  const double scale = std::pow(eta_, -d * q);
  double total = 0;
  for (auto& t : terms_) {
    double term = t.weight * scale;
    for (int i = 0; i < d && term != 0; ++i)
      term *= integrate([&](double x) { return factor(t, i, x, q); }, t.lo(i), t.hi(i), 256);
    total += term;
  }
  return total;
}

void JMeasure::grid(double R, double step, std::size_t n, std::vector<std::vector<cplx>>& out) const {
  const int d = C_->dim();
  const double scale = std::pow(eta_, -d);
  out.assign(terms_.size() * static_cast<std::size_t>(d), std::vector<cplx>(n, cplx(0)));
  for (std::size_t ti = 0; ti < terms_.size(); ++ti) {
    const Term& t = terms_[ti];
    for (int i = 0; i < d; ++i) {
      auto& row = out[ti * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)];
      const double lo = t.lo(i), hi = t.hi(i);
      const GaussRule& g = gauss_legendre(gl_order(R, hi - lo));
      const double h = 0.5 * (hi - lo), c = 0.5 * (hi + lo);
      for (std::size_t q = 0; q < g.x.size(); ++q) {
        const double x = c + h * g.x[q];
        double w = factor(t, i, x, 1);
        if (w == 0) continue;
        w *= g.w[q] * h;
        if (i == 0) w *= t.weight * scale;
        const cplx inc = std::polar(1.0, -kTwoPi * x * step);
        cplx e;
        for (std::size_t j = 0; j < n; ++j) {
          if (j % 512 == 0) e = std::polar(1.0, -kTwoPi * x * (-R + static_cast<double>(j) * step));
          row[j] += w * e;
          e *= inc;
        }
      }
    }
  }
}

Json RestrictionResult::to_json() const {
  Json j;
  j["p"] = p;
  j["q"] = q;
  j["numerator"] = numerator;
  j["denominator"] = denominator;
  j["ratio"] = ratio;
  j["freq_step"] = freq_step;
  j["box_radius"] = box_radius;
  j["grid_points"] = grid_points;
  j["lipschitz_error"] = lipschitz_error;
  return j;
}

std::vector<RestrictionResult> restriction_ratios(const Construction& C, int k, const std::vector<double>& ps, double q,
                                                  double freq_step, double box_radius, double grid_budget) {
  const Level& L = C.level(k);
  if (!L.J) throw DomainError("restriction_ratio needs odd k");
  const int d = C.dim();
  const double lg = std::log(L.M);
  const double max_step = 1 / (2 * lg * lg);
  const double step = freq_step > 0 ? freq_step : max_step;
  if (step > max_step * (1 + 1e-12)) throw DomainError("freqStep exceeds 1/(2 log^2 M_k)");
  const double R = box_radius > 0 ? box_radius : 2 * std::pow(L.M, 1 + C.tau());
  const std::int64_t m = static_cast<std::int64_t>(std::floor(R / step));
  const std::size_t n = static_cast<std::size_t>(2 * m + 1);
  JMeasure jm(C, k);
  const std::size_t T = jm.terms();
  const double work = std::pow(static_cast<double>(n), d) * static_cast<double>(T) / 2;
  if (work > grid_budget) {
    const double fit = step * std::pow(2 * grid_budget / static_cast<double>(std::max<std::size_t>(T, 1)), 1.0 / d) / 2;
    throw CapExceeded("restriction grid needs " + std::to_string(work) + " operations; reduce boxRadius to " +
                      std::to_string(fit) + " or below");
  }
  const double Rg = static_cast<double>(m) * step;
  std::vector<std::vector<cplx>> rows;
  jm.grid(Rg, step, n, rows);
  std::vector<Eigen::MatrixXcd> B(static_cast<std::size_t>(d), Eigen::MatrixXcd(static_cast<Eigen::Index>(n),
                                                                                  static_cast<Eigen::Index>(T)));
  for (std::size_t t = 0; t < T; ++t)
    for (int i = 0; i < d; ++i)
      for (std::size_t j = 0; j < n; ++j)
        B[static_cast<std::size_t>(i)](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) =
            rows[t * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)][j];
  rows.clear();

  // Multi-indices over the first d-1 axes; F(-xi) = conj F(xi) mirrors a combo onto the reversed row.
  std::size_t combos = 1;
  for (int i = 0; i + 1 < d; ++i) combos *= n;
  const std::size_t centre = (combos - 1) / 2;
  std::vector<double> sums(ps.size(), 0.0);
  double fmax = 0, lip = 0;
  Eigen::VectorXcd a(static_cast<Eigen::Index>(T)), row(static_cast<Eigen::Index>(n));
  std::vector<std::size_t> idx(static_cast<std::size_t>(std::max(d - 1, 0)), 0);
  for (std::size_t c = 0; c <= centre; ++c) {
    std::size_t rem = c;
    for (int i = d - 2; i >= 0; --i) {
      idx[static_cast<std::size_t>(i)] = rem % n;
      rem /= n;
    }
    a.setOnes();
    for (int i = 0; i + 1 < d; ++i)
      a = a.cwiseProduct(B[static_cast<std::size_t>(i)].row(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)])).transpose());
    row.noalias() = B[static_cast<std::size_t>(d - 1)] * a;
    const double w = c == centre ? 1.0 : 2.0;
    std::vector<double> local(ps.size(), 0.0);
    double prev = std::abs(row(0));
    for (Eigen::Index j = 0; j < row.size(); ++j) {
      const double z2 = std::norm(row(j));
      for (std::size_t pi = 0; pi < ps.size(); ++pi) local[pi] += abs_pow(z2, ps[pi]);
      const double az = std::sqrt(z2);
      fmax = std::max(fmax, az);
      lip = std::max(lip, std::abs(az - prev) / step);
      prev = az;
    }
    for (std::size_t pi = 0; pi < ps.size(); ++pi) sums[pi] += w * local[pi];
  }
  const double denom = std::pow(jm.moment(q), 1 / q);
  std::vector<RestrictionResult> out;
  for (std::size_t pi = 0; pi < ps.size(); ++pi) {
    RestrictionResult r;
    r.p = ps[pi];
    r.q = q;
    r.numerator = std::pow(std::pow(step, d) * sums[pi], 1 / ps[pi]);
    r.denominator = denom;
    r.ratio = r.numerator / denom;
    r.freq_step = step;
    r.box_radius = Rg;
    r.grid_points = static_cast<std::size_t>(std::pow(static_cast<double>(n), d));
    r.lipschitz_error = fmax > 0 ? ps[pi] * lip * step * std::sqrt(static_cast<double>(d)) / 2 / fmax : 0;
    out.push_back(r);
  }
  return out;
}

RestrictionResult restriction_ratio(const Construction& C, int k, double p, double q, double freq_step,
                                    double box_radius) {
  return restriction_ratios(C, k, {p}, q, freq_step, box_radius).front();
}

LemmaReport lower_bound_check(const Construction& C, int k, int h_points) {
  const auto t0 = std::chrono::steady_clock::now();
  const Level& L = C.level(k);
  const int d = C.dim();
  LemmaReport r;
  r.id = "lower_bound";
  r.instance = "level " + std::to_string(k) + ", M = " + std::to_string(L.M) + ", rho = " + std::to_string(C.rho());
  JMeasure jm(C, k);
  const auto S = S_Jk(C, k);
  const double scale = std::log(L.M) * std::pow(L.M, d * C.tau() + C.rho_plus());
  double mn = INFINITY, mx = 0;
  Veci argmin;
  for (auto& s : S) {
    const double v = std::abs(jm.hat(s.cast<double>()));
    if (v < mn) {
      mn = v;
      argmin = s;
    }
    mx = std::max(mx, v);
  }
  r.computed["S_J_points"] = S.size();
  r.computed["J_terms"] = jm.terms();
  r.computed["min_abs"] = mn;
  r.computed["max_abs"] = mx;
  r.computed["min_ratio"] = mn / scale;
  r.computed["normalizer"] = scale;
  if (argmin.size() > 0) r.witnesses.push_back({{"argmin", std::vector<std::int64_t>(argmin.data(), argmin.data() + d)}});
  bool ok = !S.empty() && mn > 0;
  r.fitted_constant = mn / scale;
  // h1 = c P Phi_J^2 and h2 = c Phi_J sum_{I in Q} Phi_I agree for rho = 0.
  if (C.rho() == 0) {
    const Source& J = j_source(L);
    std::mt19937_64 rng(k * 7919 + 17);
    std::uniform_real_distribution<double> U(-1, 1);
    auto centres = points_in_box(J.inv, Vecd::Constant(d, 0.125), Vecd::Constant(d, 0.375), true);
    double worst = 0, worst_abs = 0;
    int tested = 0;
    for (int t = 0; t < h_points && !centres.empty(); ++t) {
      Vecd x = centres[static_cast<std::size_t>(t) % centres.size()];
      for (int i = 0; i < d; ++i) x(i) += L.eta * U(rng);
      const double pj = Phi_eval(J.inv, L.eta, x);
      double sq = 0;
      for (auto& s : L.sources)
        if (s.in_Q) sq += Phi_eval(s.inv, L.eta, x);
      const double h1 = L.c * L.P * pj * pj, h2 = L.c * pj * sq;
      const double diff = std::abs(h1 - h2);
      worst_abs = std::max(worst_abs, diff);
      worst = std::max(worst, diff / std::max(std::abs(h1), 1e-300));
      ++tested;
    }
    r.computed["h_identity"] = {{"points", tested}, {"max_rel_diff", worst}, {"max_abs_diff", worst_abs}};
    ok = ok && tested > 0 && worst <= 1e-10;
  }
  r.bounds = {{"lower_bound", "min |(Phi_J mu_k)^(s)| / (log M M^{d tau + rho^+}) > 0 on S(J_k)"},
              {"h_identity_tolerance", 1e-10}};
  r.pass = ok;
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace salem
