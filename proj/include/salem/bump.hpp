#pragma once

#include "salem/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace salem {

// Gauss-Legendre rule on [-1,1]; cached per order.
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

template <typename F>
double integrate(F&& f, double a, double b, int n) {
  const GaussRule& g = gauss_legendre(n);
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double s = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(c + h * g.x[i]);
  return s * h;
}

// m_a(t) = exp(-a/(1-t^2)) on (-1,1), zero outside.
inline double bump_raw(double t, double a = 1.0) {
  const double u = 1.0 - t * t;
  return u > 0 ? std::exp(-a / u) : 0.0;
}

// g(t) = scale * m_a(t) with a cached, even, real Fourier transform
// ghat(xi) = int g(t) e^{-2 pi i t xi} dt.
class Profile1D {
 public:
  struct Options {
    int nodes = 2000;
    double step = 1.0 / 512;
    double range = 256;
    int far_orders = 30;
  };

  Profile1D(double a, double scale);
  Profile1D(double a, double scale, Options opt);

  double eval(double t) const { return scale_ * bump_raw(t, a_); }
  double hat(double xi) const;
  double hat_direct(double xi) const;
  // |ghat(xi)| <= min_n C_n / (2 pi |xi|)^n.
  double far_bound(double xi) const;
  // Upper bound for |ghat(xi)| valid at every xi.
  double envelope(double xi) const;
  // Bound on sum over integers n with |n| > R of |ghat(n / scale)|.
  double tail_sum_bound(double scale, double R) const;
  // Bound on sum over all integers n of |ghat(n / scale)|.
  double abs_sum_bound(double scale) const;

  double a() const { return a_; }
  double scale() const { return scale_; }
  const Options& options() const { return opt_; }
  double interp_error() const { return interp_err_; }
  const std::vector<double>& far_constants() const { return far_c_; }

 private:
  void build();
  double a_, scale_;
  Options opt_;
  std::vector<double> val_, der_;
  std::vector<double> far_c_;  // C_n for n = 0..far_orders
  double interp_err_ = 0;
};

// Tensor bumps phi, phi^2, phi0, psi in dimension d.
//   phi   = prod c m(x_i)                         support [-1,1]^d
//   phi0  = prod 8 c m(8(x_i - 1/4))              support [1/8,3/8]^d
//   psi   = prod m(x_i/2)/m(1/2)                  support [-2,2]^d, >= 1 on [-1,1]^d
class BumpFamily {
 public:
  explicit BumpFamily(int d);

  int dim() const { return d_; }
  const Profile1D& phi1() const { return phi_; }
  const Profile1D& phi1_sq() const { return phi_sq_; }
  double norm_const() const { return c_norm_; }

  double phi_eval(const Vecd& x) const;
  double phi_hat(const Vecd& xi) const;
  double phi_sq_hat(const Vecd& xi) const;
  double phi0_eval(const Vecd& x) const;
  cplx phi0_hat(const Vecd& xi) const;
  double psi_eval(const Vecd& x) const;
  double psi_hat(const Vecd& xi) const;

  double phi0_1d(double t) const { return 8.0 * phi_.eval(8.0 * (t - 0.25)); }
  cplx phi0_hat_1d(double xi) const;
  double psi_1d(double t) const { return bump_raw(0.5 * t) / psi_floor_; }
  double psi_hat_1d(double xi) const { return 2.0 / (c_norm_ * psi_floor_) * phi_.hat(2.0 * xi); }

  // Largest c in (0,1) with phi_sq_hat(xi) >= c whenever |xi| <= c.
  double c_lower() const { return c_lower_; }
  double phi_sup() const;
  // Fitted C_N with |phi_hat(xi e_1)| <= C_N (1+|xi|)^{-N} on a log grid up to xi_max.
  std::vector<double> schwartz_constants(int max_order, double xi_max) const;
  std::string profile_hash() const;
  std::string describe() const;

 private:
  int d_;
  double c_norm_;
  double psi_floor_;
  Profile1D phi_, phi_sq_;
  double c_lower_ = 0;
};

// Shared instance per dimension.
const BumpFamily& bumps(int d);

}  // namespace salem
