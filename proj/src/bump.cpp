#include "salem/bump.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace salem {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  if (n < 1) throw DomainError("Gauss-Legendre order must be positive");
  auto rule = std::make_unique<GaussRule>();
  std::vector<double> z = boost::math::legendre_p_zeros<double>(n);
  for (double x : z) {
    double dp = boost::math::legendre_p_prime(n, x);
    double w = 2.0 / ((1 - x * x) * dp * dp);
    rule->x.push_back(x);
    rule->w.push_back(w);
    if (x != 0) {
      rule->x.push_back(-x);
      rule->w.push_back(w);
    }
  }
  std::vector<std::size_t> idx(rule->x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rule->x[a] < rule->x[b]; });
  GaussRule sorted;
  for (auto i : idx) {
    sorted.x.push_back(rule->x[i]);
    sorted.w.push_back(rule->w[i]);
  }
  *rule = std::move(sorted);
  return *cache.emplace(n, std::move(rule)).first->second;
}

Profile1D::Profile1D(double a, double scale) : Profile1D(a, scale, Options{}) {}

Profile1D::Profile1D(double a, double scale, Options opt) : a_(a), scale_(scale), opt_(opt) { build(); }

void Profile1D::build() {
  const GaussRule& g = gauss_legendre(opt_.nodes);
  std::vector<double> t, wg;
  for (std::size_t j = 0; j < g.x.size(); ++j) {
    if (g.x[j] <= 0) continue;
    t.push_back(g.x[j]);
    wg.push_back(2 * g.w[j] * eval(g.x[j]));
  }
  const std::size_t K = static_cast<std::size_t>(std::ceil(opt_.range / opt_.step)) + 2;
  val_.assign(K, 0.0);
  der_.assign(K, 0.0);
  const std::size_t J = t.size();
  std::vector<cplx> rot(J), cur(J);
  for (std::size_t j = 0; j < J; ++j) rot[j] = std::polar(1.0, kTwoPi * t[j] * opt_.step);
  for (std::size_t k = 0; k < K; ++k) {
    if (k % 1024 == 0)
      for (std::size_t j = 0; j < J; ++j) cur[j] = std::polar(1.0, kTwoPi * t[j] * opt_.step * static_cast<double>(k));
    double v = 0, dv = 0;
    for (std::size_t j = 0; j < J; ++j) {
      v += wg[j] * cur[j].real();
      dv -= wg[j] * kTwoPi * t[j] * cur[j].imag();
      cur[j] *= rot[j];
    }
    val_[k] = v;
    der_[k] = dv;
  }

  // derivative norms of m_a: m^{(n)} = P_n / u^{2n} m, u = 1 - t^2
  far_c_.assign(static_cast<std::size_t>(opt_.far_orders + 1), 0.0);
  std::vector<long double> P{1.0L};
  const GaussRule& q = gauss_legendre(4000);
  for (int n = 0; n <= opt_.far_orders; ++n) {
    long double acc = 0;
    for (std::size_t j = 0; j < q.x.size(); ++j) {
      long double x = q.x[j], u = 1 - x * x;
      long double m = std::exp(-a_ / u);
      if (m == 0) continue;
      long double p = 0;
      for (std::size_t i = P.size(); i-- > 0;) p = p * x + P[i];
      acc += q.w[j] * std::fabs(p * m / std::pow(u, 2.0L * n));
    }
    far_c_[static_cast<std::size_t>(n)] = static_cast<double>(1.25L * scale_ * acc);
    // P_{n+1} = P' u^2 + 4 n t u P - 2 a t P
    std::vector<long double> dP(P.size() > 1 ? P.size() - 1 : 1, 0.0L);
    for (std::size_t i = 1; i < P.size(); ++i) dP[i - 1] = static_cast<long double>(i) * P[i];
    std::vector<long double> Q(P.size() + 4, 0.0L);
    const long double u2[5] = {1, 0, -2, 0, 1};
    for (std::size_t i = 0; i < dP.size(); ++i)
      for (int e = 0; e < 5; ++e) Q[i + static_cast<std::size_t>(e)] += dP[i] * u2[e];
    for (std::size_t i = 0; i < P.size(); ++i) {
      Q[i + 1] += 4.0L * n * P[i] - 2.0L * a_ * P[i];
      Q[i + 3] -= 4.0L * n * P[i];
    }
    while (Q.size() > 1 && Q.back() == 0) Q.pop_back();
    P = std::move(Q);
  }

  double err = 0;
  for (int i = 0; i < 64; ++i) {
    double xi = (std::min(opt_.range, 48.0) * (i + 0.5) / 64.0) + 0.5 * opt_.step;
    err = std::max(err, std::fabs(hat(xi) - hat_direct(xi)));
  }
  interp_err_ = 4 * err + 1e-15;
}

double Profile1D::hat(double xi) const {
  xi = std::fabs(xi);
  if (xi >= opt_.range) return 0.0;
  const double s = xi / opt_.step;
  const std::size_t k = static_cast<std::size_t>(s);
  const double u = s - static_cast<double>(k), h = opt_.step;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * val_[k] + (u3 - 2 * u2 + u) * h * der_[k] + (-2 * u3 + 3 * u2) * val_[k + 1] +
         (u3 - u2) * h * der_[k + 1];
}

double Profile1D::hat_direct(double xi) const {
  const GaussRule& g = gauss_legendre(opt_.nodes);
  double s = 0;
  for (std::size_t j = 0; j < g.x.size(); ++j) s += g.w[j] * eval(g.x[j]) * std::cos(kTwoPi * g.x[j] * xi);
  return s;
}

double Profile1D::far_bound(double xi) const {
  const double z = kTwoPi * std::fabs(xi);
  double best = far_c_[0];
  double p = 1;
  for (std::size_t n = 1; n < far_c_.size(); ++n) {
    p *= z;
    best = std::min(best, far_c_[n] / p);
  }
  return best;
}

double Profile1D::envelope(double xi) const {
  if (std::fabs(xi) < opt_.range) return std::min(std::fabs(hat(xi)) + interp_err_, far_bound(xi));
  return far_bound(xi);
}

double Profile1D::tail_sum_bound(double scale, double R) const {
  const double n0 = std::floor(std::max(R, 0.0)) + 1;
  const double n_hi = std::max(n0, std::min(opt_.range * scale, n0 + 2e5));
  double s = 0;
  for (double n = n0; n < n_hi; n += 1) s += envelope(n / scale);
  double far = std::numeric_limits<double>::infinity();
  const double base = scale / kTwoPi;
  double p = 1;
  for (std::size_t j = 1; j < far_c_.size(); ++j) {
    p *= base;
    if (j < 2) continue;
    far = std::min(far, far_c_[j] * p * std::pow(n_hi - 1, 1.0 - static_cast<double>(j)) / (static_cast<double>(j) - 1));
  }
  return 2 * (s + far);
}

double Profile1D::abs_sum_bound(double scale) const { return envelope(0) + tail_sum_bound(scale, 0); }

BumpFamily::BumpFamily(int d)
    : d_(d),
      c_norm_(1.0 / integrate([](double t) { return bump_raw(t); }, -1, 1, 2000)),
      psi_floor_(bump_raw(0.5)),
      phi_(1.0, c_norm_),
      phi_sq_(2.0, c_norm_ * c_norm_) {
  if (d < 1) throw DomainError("dimension must be positive");
  auto worst = [&](double c) {
    double m = phi_sq_.hat(0);
    for (double t = 0; t <= c; t += 1e-3) m = std::min(m, phi_sq_.hat(t));
    m = std::min(m, phi_sq_.hat(c));
    return std::pow(m, d_);
  };
  double lo = 0, hi = 1;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (worst(mid) >= mid) lo = mid;
    else hi = mid;
  }
  c_lower_ = 0.999 * lo;
}

double BumpFamily::phi_eval(const Vecd& x) const {
  double r = 1;
  for (int i = 0; i < d_; ++i) r *= phi_.eval(x(i));
  return r;
}

double BumpFamily::phi_hat(const Vecd& xi) const {
  double r = 1;
  for (int i = 0; i < d_; ++i) r *= phi_.hat(xi(i));
  return r;
}

double BumpFamily::phi_sq_hat(const Vecd& xi) const {
  double r = 1;
  for (int i = 0; i < d_; ++i) r *= phi_sq_.hat(xi(i));
  return r;
}

double BumpFamily::phi0_eval(const Vecd& x) const {
  double r = 1;
  for (int i = 0; i < d_; ++i) r *= phi0_1d(x(i));
  return r;
}

cplx BumpFamily::phi0_hat_1d(double xi) const { return std::polar(phi_.hat(xi / 8.0), -kTwoPi * xi / 4.0); }

cplx BumpFamily::phi0_hat(const Vecd& xi) const {
  cplx r = 1;
  for (int i = 0; i < d_; ++i) r *= phi0_hat_1d(xi(i));
  return r;
}

double BumpFamily::psi_eval(const Vecd& x) const {
  double r = 1;
  for (int i = 0; i < d_; ++i) r *= psi_1d(x(i));
  return r;
}

double BumpFamily::psi_hat(const Vecd& xi) const {
  double r = 1;
  for (int i = 0; i < d_; ++i) r *= psi_hat_1d(xi(i));
  return r;
}

double BumpFamily::phi_sup() const { return std::pow(c_norm_ * std::exp(-1.0), d_); }

std::vector<double> BumpFamily::schwartz_constants(int max_order, double xi_max) const {
  std::vector<double> C(static_cast<std::size_t>(max_order + 1), 0.0);
  const int n = 600;
  for (int i = 0; i <= n; ++i) {
    double xi = i == 0 ? 0.0 : std::pow(10.0, -2.0 + (std::log10(xi_max) + 2.0) * i / n);
    double v = xi < phi_.options().range ? std::fabs(phi_.hat(xi)) : phi_.far_bound(xi);
    v = std::min(v, phi_.far_bound(xi));
    double w = 1;
    for (int N = 0; N <= max_order; ++N) {
      C[static_cast<std::size_t>(N)] = std::max(C[static_cast<std::size_t>(N)], v * w);
      w *= 1 + xi;
    }
  }
  return C;
}

std::string BumpFamily::describe() const {
  const auto& o = phi_.options();
  std::ostringstream os;
  os << "{\"profile\":\"exp(-1/(1-t^2))\",\"d\":" << d_ << ",\"nodes\":" << o.nodes << ",\"step\":" << fmt(o.step)
     << ",\"range\":" << fmt(o.range) << ",\"far_orders\":" << o.far_orders << ",\"c_norm\":" << fmt(c_norm_)
     << ",\"c_lower\":" << fmt(c_lower_) << "}";
  return os.str();
}

std::string BumpFamily::profile_hash() const {
  std::string s = describe();
  for (double xi : {0.0, 0.5, 1.0, 3.0, 10.0}) s += fmt(phi_.hat(xi)) + fmt(phi_sq_.hat(xi));
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(s)));
  return buf;
}

const BumpFamily& bumps(int d) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<BumpFamily>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it != cache.end()) return *it->second;
  return *cache.emplace(d, std::make_unique<BumpFamily>(d)).first->second;
}

}  // namespace salem
