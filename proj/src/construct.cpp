#include "salem/construct.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace salem {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;


std::string rat_str(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

// Smallest GL order 64 * 2^m covering the oscillation of e(x s) on an interval of length L.
int gl_order(double s, double L) {
  const double need = M_PI * std::abs(s) * L + 64;
  int n = 64;
  while (n < need && n < 8192) n *= 2;
  return n;
}

double wrap_half(double t) { return t - std::floor(t + 0.5); }

}  // namespace

double Phi_eval(const LatticeView& inv, double eta, const Vecd& x) {
  if (!(eta > 0)) throw DomainError("eta must be positive");
  const int d = inv.dim();
  const BumpFamily& b = bumps(d);
  Vecd lo = x.array() - eta, hi = x.array() + eta;
  const double s = 1.0 / static_cast<double>(inv.fast.den);
  double acc = 0;
  for_each_point(inv.fast, box_bounds(inv.fast, lo, hi, true), kDefaultPointCap, [&](const std::int64_t* y) {
    double v = 1;
    for (int j = 0; j < d; ++j) v *= b.phi1().eval((x(j) - static_cast<double>(y[j]) * s) / eta);
    acc += v;
  });
  return acc * std::pow(eta, -d);
}

double Phi_eval(const NumberField& K, const FracIdeal& I, double eta, const Vecd& x) {
  return Phi_eval(LatticeView(ideal_inverse(K, I)), eta, x);
}

namespace {
bool spectral_indicator(const NumberField& K, const FracIdeal& I, const Veci& s) {
  FracIdeal target = ideal_mul(K, ideal_inverse(K, different_ideal(K)), I);
  RatVec sv(s.size());
  for (Eigen::Index j = 0; j < s.size(); ++j) sv(j) = Rational(Integer(s(j)));
  return target.lattice().contains(RatVec(K.trace_inverse() * sv));
}
}  // namespace

double Phi_hat(const NumberField& K, const FracIdeal& I, double eta, const Veci& s) {
  if (!(eta > 0)) throw DomainError("eta must be positive");
  if (!I.is_integral()) throw DomainError("Phi_hat needs an integral ideal");
  if (!spectral_indicator(K, I, s)) return 0;
  const BumpFamily& b = bumps(K.degree());
  return b.phi_hat(eta * s.cast<double>()) * to_double(ideal_norm(I));
}

double Phi_sq_hat(const NumberField& K, const FracIdeal& I, double eta, const Veci& s) {
  const int d = K.degree();
  const double n = to_double(ideal_norm(I));
  if (!(eta > 0) || !(eta < std::pow(n, -1.0 / d) / K.C_B()))
    throw DomainError("Phi_sq_hat needs 0 < eta < C_B^{-1} N(I)^{-1/d}");
  if (!spectral_indicator(K, I, s)) return 0;
  const BumpFamily& b = bumps(d);
  return std::pow(eta, -d) * b.phi_sq_hat(eta * s.cast<double>()) * n;
}

std::string FourierArray::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  const int d = static_cast<int>(lo.size());
  for (int j = 0; j < d; ++j) os << "s" << j + 1 << ",";
  os << "re,im,tail_bound\n";
  for (auto& [s, v] : coef) {
    for (auto c : s) os << c << ",";
    os << v.real() << "," << v.imag() << "," << tail_bound << "\n";
  }
  return os.str();
}

Construction::Construction(const NumberField& K, double tau, double rho, std::vector<double> M, int N, double M0)
    : K_(K), bump_(&bumps(K.degree())), d_(K.degree()), tau_(tau), rho_(rho), N_(N) {
  if (!(tau > 1)) throw DomainError("tau must exceed 1");
  if (!(rho > -d_ && rho < d_)) throw DomainError("rho must lie in (-d, d)");
  if (N < 1) throw DomainError("Schwartz order must be positive");
  if (M.empty()) throw DomainError("empty M list");
  M0_ = M0 > 0 ? M0 : std::pow(4.0, 1.0 / (1 + tau));
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (!(M[i] > (i == 0 ? M0_ : M[i - 1]))) throw DomainError("M must be strictly increasing and exceed M0");
  }
  const double rm = rho_minus();
  for (std::size_t i = 0; i < M.size(); ++i) {
    Level L;
    L.k = static_cast<int>(i) + 1;
    L.M = M[i];
    L.eta = std::pow(L.M, -(1 + tau));
    const bool odd = L.k % 2 == 1;
    L.P = odd ? std::pow(L.M, rm) : 0.0;
    if (odd) {
      const double r = std::round(L.P);
      L.P_exact = std::abs(L.P - r) < 1e-9 * std::max(1.0, r) ? Rational(Integer(static_cast<long long>(r)))
                                                              : exact_rational(L.P);
    } else {
      L.P_exact = 0;
    }
    L.Q = enumerate_Q(K_, L.M);
    if (L.Q.empty()) throw DomainError("Q(M_" + std::to_string(L.k) + ") is empty");
    if (odd) L.J = pick_J(K_, L.M, rho);
    Rational total = 0;
    for (auto& q : L.Q) total += Rational(Integer(q.norm));
    if (L.J) total += L.P_exact * Rational(Integer(L.J->norm));
    L.c_exact = Rational(1) / total;
    L.c = to_double(L.c_exact);
    auto add = [&](const PrimeIdealRecord& r, double w, bool is_J) {
      for (auto& s : L.sources) {
        if (s.ideal == r.ideal) {
          s.weight += w;
          s.is_J = s.is_J || is_J;
          s.in_Q = s.in_Q || !is_J;
          return;
        }
      }
      Source s;
      s.ideal = r.ideal;
      s.norm = r.norm;
      s.weight = w;
      s.is_J = is_J;
      s.in_Q = !is_J;
      s.inv = LatticeView(ideal_inverse(K_, r.ideal));
      s.spectral = Lattice64(spectral_lattice(K_, r.ideal));
      L.sources.push_back(std::move(s));
    };
    for (auto& q : L.Q) add(q, 1.0, false);
    if (L.J) add(*L.J, L.P, true);
    L.annulus_radius = K_.C0() * std::pow(L.M, 1 - rm / d_);
    levels_.push_back(std::move(L));
  }

  for (auto& L : levels_) {
    const std::string tag = "level " + std::to_string(L.k) + ": ";
    for (auto& s : L.sources) {
      if (!(L.eta < std::pow(static_cast<double>(s.norm), -1.0 / d_) / K_.C_B())) {
        warnings_.push_back(tag + "eta >= C_B^{-1} N(I)^{-1/d} for " + s.ideal.to_string());
        break;
      }
    }
    if (3 * L.eta >= 0.125) warnings_.push_back(tag + "3 eta >= 1/8, integer points may touch supp(phi0)");
    if (L.eta * L.M * L.M >= 0.25) warnings_.push_back(tag + "eta is not small against M^{-2}");
    if (L.k >= 2) {
      // Distinct centers satisfy C_B |r1 - r2| >= N(I1 I2)^{-1/d}; coincident ones are integers.
      const Level& prev = levels_[static_cast<std::size_t>(L.k - 2)];
      double nmax = 0, pmax = 0;
      for (auto& s : L.sources) nmax = std::max(nmax, static_cast<double>(s.norm));
      for (auto& s : prev.sources) pmax = std::max(pmax, static_cast<double>(s.norm));
      const double sep = std::pow(nmax * pmax, -1.0 / d_) / K_.C_B();
      if (sep > std::sqrt(static_cast<double>(d_)) * (prev.eta + L.eta)) {
        std::ostringstream os;
        os << tag << "level centers are at least " << sep << " from level-" << prev.k
           << " centers, beyond the ball radii; mu_" << L.k << " vanishes identically";
        warnings_.push_back(os.str());
      }
    }
  }
}

const Level& Construction::level(int k) const {
  if (k < 1 || k > depth()) throw DomainError("level index out of range");
  return levels_[static_cast<std::size_t>(k - 1)];
}

std::string Construction::describe() const {
  nlohmann::json j;
  j["tau"] = tau_;
  j["rho"] = rho_;
  j["N"] = N_;
  j["M0"] = M0_;
  j["field"] = K_.poly_coeffs();
  j["bump_hash"] = bump_->profile_hash();
  for (auto& L : levels_) {
    nlohmann::json l;
    l["k"] = L.k;
    l["M"] = L.M;
    l["eta"] = L.eta;
    l["P"] = rat_str(L.P_exact);
    l["c"] = rat_str(L.c_exact);
    l["Q_size"] = L.Q.size();
    std::int64_t sum = 0;
    for (auto& q : L.Q) sum += q.norm;
    l["Q_norm_sum"] = sum;
    if (L.J) {
      l["J"] = L.J->ideal.to_string();
      l["J_norm"] = L.J->norm;
    }
    l["annulus_radius"] = L.annulus_radius;
    j["levels"].push_back(l);
  }
  j["warnings"] = warnings_;
  return j.dump();
}

double Construction::spectral_weight(int k, const Veci& s) const {
  const Level& L = level(k);
  if (s.size() != d_) throw DomainError("frequency dimension mismatch");
  double w = 0;
  for (auto& src : L.sources)
    if (src.spectral.contains_numerators(s.data())) w += src.weight * static_cast<double>(src.norm);
  return w;
}

double Construction::Fk_hat(int k, const Veci& s) const {
  const Level& L = level(k);
  const double w = spectral_weight(k, s);
  if (w == 0) return 0;
  double ph = 1;
  for (int j = 0; j < d_; ++j) ph *= bump_->phi1().hat(L.eta * static_cast<double>(s(j)));
  return L.c * ph * w;
}

const Construction::TorusIndex& Construction::torus(int k) const {
  {
    std::lock_guard<std::mutex> g(mu_);
    auto it = torus_cache_.find(k);
    if (it != torus_cache_.end()) return *it->second;
  }
  const Level& L = level(k);
  auto T = std::make_unique<TorusIndex>();
  T->cells = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(1.0 / (2 * L.eta))));
  if (T->cells < 3) T->cells = 1;
  T->cell = 1.0 / static_cast<double>(T->cells);
  for (auto& src : L.sources) {
    const double w = L.c * src.weight * std::pow(L.eta, -d_);
    for (auto& r : points_in_box(src.inv, Vecd::Zero(d_), Vecd::Ones(d_), false)) {
      std::vector<std::int64_t> key(static_cast<std::size_t>(d_));
      for (int j = 0; j < d_; ++j)
        key[static_cast<std::size_t>(j)] =
            std::min(T->cells - 1, static_cast<std::int64_t>(std::floor(r(j) / T->cell)));
      T->buckets[key].emplace_back(r, w);
    }
  }
  std::lock_guard<std::mutex> g(mu_);
  auto& slot = torus_cache_[k];
  if (!slot) slot = std::move(T);
  return *slot;
}

double Construction::Fk_eval(int k, const Vecd& x) const {
  const Level& L = level(k);
  const TorusIndex& T = torus(k);
  Vecd y(d_);
  std::vector<std::int64_t> base(static_cast<std::size_t>(d_));
  for (int j = 0; j < d_; ++j) {
    y(j) = x(j) - std::floor(x(j));
    base[static_cast<std::size_t>(j)] = std::min(T.cells - 1, static_cast<std::int64_t>(std::floor(y(j) / T.cell)));
  }
  const int span = T.cells == 1 ? 1 : 3;
  int combos = 1;
  for (int j = 0; j < d_; ++j) combos *= span;
  double acc = 0;
  std::vector<std::int64_t> key(static_cast<std::size_t>(d_));
  for (int c = 0; c < combos; ++c) {
    int t = c;
    for (int j = 0; j < d_; ++j) {
      const std::int64_t off = span == 1 ? 0 : (t % 3) - 1;
      t /= span;
      std::int64_t v = base[static_cast<std::size_t>(j)] + off;
      key[static_cast<std::size_t>(j)] = ((v % T.cells) + T.cells) % T.cells;
    }
    auto it = T.buckets.find(key);
    if (it == T.buckets.end()) continue;
    for (auto& [r, w] : it->second) {
      double v = w;
      for (int j = 0; j < d_ && v != 0; ++j) v *= bump_->phi1().eval(wrap_half(y(j) - r(j)) / L.eta);
      acc += v;
    }
  }
  return acc;
}

double Construction::mu_density(int k, const Vecd& x) const {
  double v = bump_->phi0_eval(x);
  for (int j = 1; j <= k && v != 0; ++j) v *= Fk_eval(j, x);
  return v;
}

const std::vector<Atom>& Construction::atoms(int top, int skip) const {
  if (top < 0 || top > depth()) throw DomainError("level index out of range");
  const auto key = std::make_pair(top, skip);
  {
    std::lock_guard<std::mutex> g(mu_);
    auto it = atom_cache_.find(key);
    if (it != atom_cache_.end()) return *it->second;
  }
  std::vector<Atom> cur(1);
  cur[0].lo = Vecd::Constant(d_, 0.125);
  cur[0].hi = Vecd::Constant(d_, 0.375);
  cur[0].weight = 1;
  for (int k = 1; k <= top; ++k) {
    if (k == skip) continue;
    const Level& L = level(k);
    std::vector<Atom> next;
    for (auto& a : cur) {
      Vecd lo = a.lo.array() - L.eta, hi = a.hi.array() + L.eta;
      for (std::size_t si = 0; si < L.sources.size(); ++si) {
        const Source& src = L.sources[si];
        const double w = L.c * src.weight * std::pow(L.eta, -d_);
        for (auto& r : points_in_box(src.inv, lo, hi, true)) {
          Atom b;
          b.lo = a.lo.cwiseMax((r.array() - L.eta).matrix());
          b.hi = a.hi.cwiseMin((r.array() + L.eta).matrix());
          if (!((b.hi - b.lo).minCoeff() > 0)) continue;
          b.weight = a.weight * w;
          b.centers = a.centers;
          b.centers.push_back(r);
          b.etas = a.etas;
          b.etas.push_back(L.eta);
          b.sources = a.sources;
          b.sources.push_back(static_cast<int>(si));
          b.touches_J = src.is_J;
          next.push_back(std::move(b));
        }
      }
    }
    cur = std::move(next);
  }
  std::sort(cur.begin(), cur.end(), [](const Atom& a, const Atom& b) {
    for (Eigen::Index j = 0; j < a.lo.size(); ++j)
      if (a.lo(j) != b.lo(j)) return a.lo(j) < b.lo(j);
    for (Eigen::Index j = 0; j < a.hi.size(); ++j)
      if (a.hi(j) != b.hi(j)) return a.hi(j) < b.hi(j);
    return a.weight < b.weight;
  });
  auto p = std::make_unique<std::vector<Atom>>(std::move(cur));
  std::lock_guard<std::mutex> g(mu_);
  auto& slot = atom_cache_[key];
  if (!slot) slot = std::move(p);
  return *slot;
}

cplx Construction::atom_hat(const Atom& a, const Veci& s) const {
  cplx total = a.weight;
  const Profile1D& ph = bump_->phi1();
  for (int i = 0; i < d_; ++i) {
    const double lo = a.lo(i), hi = a.hi(i);
    const double si = static_cast<double>(s(i));
    const GaussRule& g = gauss_legendre(gl_order(si, hi - lo));
    const double h = 0.5 * (hi - lo), c = 0.5 * (hi + lo);
    cplx acc = 0;
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      const double x = c + h * g.x[q];
      double v = bump_->phi0_1d(x);
      for (std::size_t j = 0; j < a.etas.size() && v != 0; ++j) v *= ph.eval((x - a.centers[j](i)) / a.etas[j]);
      if (v == 0) continue;
      acc += g.w[q] * v * std::polar(1.0, -kTwoPi * x * si);
    }
    total *= acc * h;
  }
  return total;
}

cplx Construction::mu_hat_direct(int k, const Veci& s) const {
  if (s.size() != d_) throw DomainError("frequency dimension mismatch");
  cplx acc = 0;
  for (auto& a : atoms(k)) acc += atom_hat(a, s);
  return acc;
}

cplx Construction::mu_lk_hat_direct(int l, int k, const Veci& s) const {
  if (!(l >= k && k >= 1)) throw DomainError("mu_lk needs l >= k >= 1");
  if (l == k) return mu_hat_direct(k - 1, s);
  cplx acc = 0;
  for (auto& a : atoms(l, k)) acc += atom_hat(a, s);
  return acc;
}

double Construction::phi0_tail(double R) const {
  const Profile1D& ph = bump_->phi1();
  return d_ * ph.tail_sum_bound(8, R) * std::pow(ph.abs_sum_bound(8), d_ - 1);
}

MuHat Construction::convolve_level(int k, const Veci& s, double t_max, std::size_t cap,
                                   const std::function<cplx(const Veci&)>& inner, double inner_tail,
                                   bool certified) const {
  const Level& L = level(k);
  if (s.size() != d_) throw DomainError("frequency dimension mismatch");
  if (!(t_max >= 0)) throw DomainError("t_max must be nonnegative");
  const Profile1D& ph = bump_->phi1();
  double expected = 0;
  BoxBounds bb;
  for (int j = 0; j < d_; ++j) {
    bb.lo.push_back(static_cast<std::int64_t>(std::ceil(static_cast<double>(s(j)) - t_max)));
    bb.hi.push_back(static_cast<std::int64_t>(std::floor(static_cast<double>(s(j)) + t_max)));
  }
  for (auto& src : L.sources) {
    double det = 1, vol = 1;
    for (int j = 0; j < d_; ++j) {
      det *= static_cast<double>(src.spectral.at(j, j));
      vol *= static_cast<double>(bb.hi[static_cast<std::size_t>(j)] - bb.lo[static_cast<std::size_t>(j)] + 1);
    }
    expected += vol / det;
  }
  if (expected > 2.0 * static_cast<double>(cap) + 16)
    throw CapExceeded("convolution would need more terms than the cap allows; lower t_max");
  MuHat out;
  double max_cw = 0;
  Veci u(d_);
  for (auto& src : L.sources) {
    const double cw = L.c * src.weight * static_cast<double>(src.norm);
    max_cw = std::max(max_cw, cw);
    cplx acc = 0;
    out.terms += for_each_point(src.spectral, bb, cap, [&](const std::int64_t* lam) {
      double f = 1;
      for (int j = 0; j < d_ && f != 0; ++j) f *= ph.hat(L.eta * static_cast<double>(lam[j]));
      if (f == 0) return;
      for (int j = 0; j < d_; ++j) u(j) = s(j) - lam[j];
      if (inner) {
        acc += f * inner(u);
      } else {
        cplx v = 1;
        for (int j = 0; j < d_; ++j) v *= bump_->phi0_hat_1d(static_cast<double>(u(j)));
        acc += f * v;
      }
    });
    out.value += cw * acc;
  }
  const double e = d_ * ph.interp_error();
  const double a1 = std::pow(ph.abs_sum_bound(8), d_);
  out.tail_bound = inner_tail + e * (a1 + static_cast<double>(out.terms) * max_cw);
  out.certified = certified;
  return out;
}

void Construction::reserve_hat(int top, int skip, std::int64_t R) const {
  const auto key = std::make_pair(top, skip);
  {
    std::lock_guard<std::mutex> g(mu_);
    auto it = hat_cache_.find(key);
    if (it != hat_cache_.end() && it->second->R >= R) return;
  }
  const auto& A = atoms(top, skip);
  auto T = std::make_shared<HatTable>();
  T->R = R;
  const Profile1D& ph = bump_->phi1();
  const std::size_t len = static_cast<std::size_t>(2 * R + 1);
  for (auto& a : A) {
    T->weight.push_back(a.weight);
    for (int i = 0; i < d_; ++i) {
      const double lo = a.lo(i), hi = a.hi(i);
      const GaussRule& g = gauss_legendre(gl_order(static_cast<double>(R), hi - lo));
      const double h = 0.5 * (hi - lo), c = 0.5 * (hi + lo);
      std::vector<double> xs, ws;
      for (std::size_t q = 0; q < g.x.size(); ++q) {
        const double x = c + h * g.x[q];
        double v = bump_->phi0_1d(x);
        for (std::size_t j = 0; j < a.etas.size() && v != 0; ++j) v *= ph.eval((x - a.centers[j](i)) / a.etas[j]);
        if (v == 0) continue;
        xs.push_back(x);
        ws.push_back(g.w[q] * v * h);
      }
      std::vector<cplx> row(len, cplx(0));
      for (std::size_t q = 0; q < xs.size(); ++q) {
        const cplx step = std::polar(1.0, -kTwoPi * xs[q]);
        cplx e;
        for (std::size_t u = 0; u < len; ++u) {
          if (u % 512 == 0) e = std::polar(1.0, -kTwoPi * xs[q] * static_cast<double>(static_cast<std::int64_t>(u) - R));
          row[u] += ws[q] * e;
          e *= step;
        }
      }
      T->f.push_back(std::move(row));
    }
  }
  std::lock_guard<std::mutex> g(mu_);
  auto& slot = hat_cache_[key];
  if (!slot || slot->R < R) slot = std::move(T);
}

cplx Construction::mu_hat_fast(int top, int skip, const Veci& s) const {
  std::shared_ptr<const HatTable> T;
  {
    std::lock_guard<std::mutex> g(mu_);
    auto it = hat_cache_.find(std::make_pair(top, skip));
    if (it != hat_cache_.end()) T = it->second;
  }
  if (!T || s.cwiseAbs().maxCoeff() > T->R) {
    if (skip == 0) return mu_hat_direct(top, s);
    cplx acc = 0;
    for (auto& a : atoms(top, skip)) acc += atom_hat(a, s);
    return acc;
  }
  cplx acc = 0;
  for (std::size_t a = 0; a < T->weight.size(); ++a) {
    cplx v = T->weight[a];
    for (int i = 0; i < d_; ++i) v *= T->f[a * static_cast<std::size_t>(d_) + static_cast<std::size_t>(i)][static_cast<std::size_t>(s(i) + T->R)];
    acc += v;
  }
  return acc;
}

MuHat Construction::mu_hat(int k, const Veci& s, double t_max, std::size_t term_cap) const {
  if (k < 0 || k > depth()) throw DomainError("level index out of range");
  if (s.size() != d_) throw DomainError("frequency dimension mismatch");
  if (k == 0) {
    MuHat m;
    m.value = bump_->phi0_hat(s.cast<double>());
    m.tail_bound = d_ * bump_->phi1().interp_error();
    m.certified = true;
    m.terms = 1;
    return m;
  }
  if (k == 1) return convolve_level(1, s, t_max, term_cap, nullptr, phi0_tail(t_max), true);
  reserve_hat(k - 1, 0, s.cwiseAbs().maxCoeff() + static_cast<std::int64_t>(std::ceil(t_max)));
  return convolve_level(
      k, s, t_max, term_cap, [&](const Veci& u) { return mu_hat_fast(k - 1, 0, u); },
      std::numeric_limits<double>::infinity(), false);
}

MuHat Construction::mu_lk_hat(int l, int k, const Veci& s, double t_max, std::size_t term_cap) const {
  if (!(l >= k && k >= 1) || l > depth()) throw DomainError("mu_lk needs depth >= l >= k >= 1");
  if (l == k) return mu_hat(k - 1, s, t_max, term_cap);
  if (l == 2 && k == 1) return convolve_level(2, s, t_max, term_cap, nullptr, phi0_tail(t_max), true);
  const int skip = l - 1 == k ? 0 : k;
  const int top = l - 1 == k ? k - 1 : l - 1;
  reserve_hat(top, skip, s.cwiseAbs().maxCoeff() + static_cast<std::int64_t>(std::ceil(t_max)));
  return convolve_level(
      l, s, t_max, term_cap, [&](const Veci& u) { return mu_hat_fast(top, skip, u); },
      std::numeric_limits<double>::infinity(), false);
}

FourierArray Construction::mu_hat_array(int k, const Veci& lo, const Veci& hi) const {
  if (lo.size() != d_ || hi.size() != d_) throw DomainError("frequency box dimension mismatch");
  FourierArray out;
  out.lo = lo;
  out.hi = hi;
  std::size_t total = 1;
  for (int j = 0; j < d_; ++j) {
    if (hi(j) < lo(j)) throw DomainError("frequency box with lo > hi");
    total *= static_cast<std::size_t>(hi(j) - lo(j) + 1);
  }
  if (total > kDefaultPointCap) throw CapExceeded("frequency box too large");
  Veci s = lo;
  for (std::size_t n = 0; n < total; ++n) {
    out.coef[std::vector<std::int64_t>(s.data(), s.data() + d_)] = mu_hat_direct(k, s);
    for (int j = d_ - 1; j >= 0; --j) {
      if (++s(j) <= hi(j)) break;
      s(j) = lo(j);
    }
  }
  return out;
}

double Construction::ball_mass(int k, const Vecd& center, double radius) const {
  if (!(radius > 0)) throw DomainError("radius must be positive");
  const Profile1D& ph = bump_->phi1();
  double total = 0;
  for (auto& a : atoms(k)) {
    Vecd lo = a.lo.cwiseMax((center.array() - radius).matrix());
    Vecd hi = a.hi.cwiseMin((center.array() + radius).matrix());
    if (!((hi - lo).minCoeff() > 0)) continue;
    double m = a.weight;
    for (int i = 0; i < d_ && m != 0; ++i) {
      m *= integrate(
          [&](double x) {
            double v = bump_->phi0_1d(x);
            for (std::size_t j = 0; j < a.etas.size() && v != 0; ++j) v *= ph.eval((x - a.centers[j](i)) / a.etas[j]);
            return v;
          },
          lo(i), hi(i), 64);
    }
    total += m;
  }
  return total;
}

double Construction::total_mass(int k) const { return mu_hat_direct(k, Veci::Zero(d_)).real(); }

std::vector<Vecd> Construction::sample_support(int k, int count, std::vector<std::string>* notes) const {
  const auto& A = atoms(k);
  std::vector<Vecd> out;
  if (count <= 0) return out;
  const std::size_t n = A.size();
  const std::size_t want = std::min<std::size_t>(n, static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < want; ++i) {
    const Atom& a = A[i * n / want];
    Vecd x = 0.5 * (a.lo + a.hi);
    if (mu_density(k, x) > 0) out.push_back(x);
  }
  if (notes && static_cast<int>(out.size()) < count) {
    notes->push_back("sample_support returned " + std::to_string(out.size()) + " of " + std::to_string(count) +
                     " requested points");
  }
  return out;
}

std::vector<cplx> Construction::Fk_hat_quadrature(int k, const std::vector<Veci>& svec, int nodes) const {
  const Level& L = level(k);
  const TorusIndex& T = torus(k);
  std::vector<Vecd> C;
  std::vector<double> W;
  std::map<std::vector<std::int64_t>, std::vector<std::size_t>> idx;
  for (auto& [key, list] : T.buckets)
    for (auto& [r, w] : list) {
      idx[key].push_back(C.size());
      C.push_back(r);
      W.push_back(w);
    }
  std::vector<std::size_t> parent(C.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto pdist = [&](const Vecd& a, const Vecd& b) {
    double m = 0;
    for (int j = 0; j < d_; ++j) m = std::max(m, std::abs(wrap_half(a(j) - b(j))));
    return m;
  };
  const int span = T.cells == 1 ? 1 : 3;
  int combos = 1;
  for (int j = 0; j < d_; ++j) combos *= span;
  for (auto& [key, list] : idx) {
    std::vector<std::int64_t> nk(key.size());
    for (int c = 0; c < combos; ++c) {
      int t = c;
      for (int j = 0; j < d_; ++j) {
        const std::int64_t off = span == 1 ? 0 : (t % 3) - 1;
        t /= span;
        nk[static_cast<std::size_t>(j)] = ((key[static_cast<std::size_t>(j)] + off) % T.cells + T.cells) % T.cells;
      }
      auto it = idx.find(nk);
      if (it == idx.end()) continue;
      for (auto a : list)
        for (auto b : it->second)
          if (a < b && pdist(C[a], C[b]) < 2 * L.eta) parent[find(a)] = find(b);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < C.size(); ++i) clusters[find(i)].push_back(i);

  const GaussRule& g = gauss_legendre(nodes);
  const std::size_t nq = g.x.size();
  std::size_t per_cell = 1;
  for (int j = 0; j < d_; ++j) per_cell *= nq;
  std::vector<cplx> out(svec.size(), cplx(0));
  std::vector<double> vals(per_cell);
  std::vector<std::vector<cplx>> E(static_cast<std::size_t>(d_), std::vector<cplx>(nq));
  for (auto& [root, members] : clusters) {
    const Vecd& r0 = C[members.front()];
    std::vector<Vecd> pts;
    Vecd lo = Vecd::Constant(d_, std::numeric_limits<double>::infinity());
    Vecd hi = -lo;
    for (auto m : members) {
      Vecd p(d_);
      for (int j = 0; j < d_; ++j) p(j) = r0(j) + wrap_half(C[m](j) - r0(j));
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
      pts.push_back(p);
    }
    lo.array() -= L.eta;
    hi.array() += L.eta;
    if ((hi - lo).maxCoeff() >= 1) throw DomainError("a cluster of balls wraps the torus");
    std::vector<int> ncell(static_cast<std::size_t>(d_));
    std::size_t cells = 1;
    for (int j = 0; j < d_; ++j) {
      ncell[static_cast<std::size_t>(j)] = std::max(1, static_cast<int>(std::ceil((hi(j) - lo(j)) / (2 * L.eta) - 1e-9)));
      cells *= static_cast<std::size_t>(ncell[static_cast<std::size_t>(j)]);
    }
    for (std::size_t cidx = 0; cidx < cells; ++cidx) {
      Vecd clo(d_), h(d_);
      std::size_t t = cidx;
      for (int j = 0; j < d_; ++j) {
        const int nc = ncell[static_cast<std::size_t>(j)];
        const double width = (hi(j) - lo(j)) / nc;
        clo(j) = lo(j) + width * static_cast<double>(t % static_cast<std::size_t>(nc));
        h(j) = 0.5 * width;
        t /= static_cast<std::size_t>(nc);
      }
      bool any = false;
      for (std::size_t q = 0; q < per_cell; ++q) {
        std::size_t u = q;
        Vecd x(d_);
        for (int j = 0; j < d_; ++j) {
          x(j) = clo(j) + h(j) * (1 + g.x[u % nq]);
          u /= nq;
        }
        double v = 0;
        for (std::size_t m = 0; m < pts.size(); ++m) {
          double b = W[members[m]];
          for (int j = 0; j < d_ && b != 0; ++j) b *= bump_->phi1().eval((x(j) - pts[m](j)) / L.eta);
          v += b;
        }
        vals[q] = v;
        any = any || v != 0;
      }
      if (!any) continue;
      for (std::size_t si = 0; si < svec.size(); ++si) {
        for (int j = 0; j < d_; ++j)
          for (std::size_t a = 0; a < nq; ++a) {
            const double x = clo(j) + h(j) * (1 + g.x[a]);
            E[static_cast<std::size_t>(j)][a] =
                g.w[a] * h(j) * std::polar(1.0, -kTwoPi * x * static_cast<double>(svec[si](j)));
          }
        cplx acc = 0;
        for (std::size_t q = 0; q < per_cell; ++q) {
          if (vals[q] == 0) continue;
          std::size_t u = q;
          cplx e = vals[q];
          for (int j = 0; j < d_; ++j) {
            e *= E[static_cast<std::size_t>(j)][u % nq];
            u /= nq;
          }
          acc += e;
        }
        out[si] += acc;
      }
    }
  }
  return out;
}

std::vector<double> growth_policy(double M1, int depth, double exponent) {
  if (!(M1 > 1) || depth < 1 || !(exponent > 1)) throw DomainError("invalid growth policy");
  std::vector<double> M{M1};
  for (int k = 1; k < depth; ++k) M.push_back(std::ceil(std::pow(M.back(), exponent)));
  return M;
}

}  // namespace salem
