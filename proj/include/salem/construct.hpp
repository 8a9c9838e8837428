#pragma once

#include "salem/bump.hpp"
#include "salem/latgeo.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace salem {

// One weighted family of k-balls: centers I^{-1}, weight w (P_k for J_k, 1 otherwise).
struct Source {
  FracIdeal ideal;
  std::int64_t norm = 0;
  double weight = 0;
  bool is_J = false;  // contributes P_k Phi_{J_k}
  bool in_Q = false;  // member of Q(M_k)
  LatticeView inv;    // I^{-1}
  Lattice64 spectral;  // T(delta^{-1} I), integer lattice
};

struct Level {
  int k = 0;
  double M = 0;
  double eta = 0;
  double P = 0;
  Rational P_exact;
  std::vector<PrimeIdealRecord> Q;
  std::optional<PrimeIdealRecord> J;
  Rational c_exact;  // 1/(P N(J) + sum N(I))
  double c = 0;
  std::vector<Source> sources;  // Q(M_k) followed by J_k; same ideal merged
  double annulus_radius = 0;    // C0 M^{1 - rho^-/d}
};

struct FourierArray {
  Veci lo, hi;
  std::map<std::vector<std::int64_t>, cplx> coef;
  double t_max = 0;
  double tail_bound = 0;
  std::string to_csv() const;
};

struct MuHat {
  cplx value;
  double tail_bound = 0;
  bool certified = false;
  std::size_t terms = 0;
};

// Support atom of mu_k (or mu_{l,k}): the intersection of one ball per level with supp(phi0).
struct Atom {
  Vecd lo, hi;
  double weight = 0;  // prod_j c_j w_j eta_j^{-d}
  std::vector<Vecd> centers;
  std::vector<double> etas;
  std::vector<int> sources;
  bool touches_J = false;  // top-level ball belongs to J_k
};

// Phi_{I,eta} and its transforms.
double Phi_eval(const LatticeView& inv, double eta, const Vecd& x);
double Phi_eval(const NumberField& K, const FracIdeal& I, double eta, const Vecd& x);
double Phi_hat(const NumberField& K, const FracIdeal& I, double eta, const Veci& s);
double Phi_sq_hat(const NumberField& K, const FracIdeal& I, double eta, const Veci& s);

class Construction {
 public:
  Construction(const NumberField& K, double tau, double rho, std::vector<double> M, int N = 24, double M0 = 0);

  const NumberField& field() const { return K_; }
  const BumpFamily& bump() const { return *bump_; }
  int dim() const { return d_; }
  int depth() const { return static_cast<int>(levels_.size()); }
  const Level& level(int k) const;
  double tau() const { return tau_; }
  double rho() const { return rho_; }
  double rho_plus() const { return std::max(rho_, 0.0); }
  double rho_minus() const { return std::max(-rho_, 0.0); }
  int schwartz_order() const { return N_; }
  double M0() const { return M0_; }
  double M(int k) const { return k == 0 ? M0_ : level(k).M; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  std::string describe() const;

  // Spectral indicator sum: sum_src w N(I) 1[s in T(delta^{-1} I)].
  double spectral_weight(int k, const Veci& s) const;
  double Fk_hat(int k, const Veci& s) const;
  double Fk_eval(int k, const Vecd& x) const;
  double mu_density(int k, const Vecd& x) const;

  // Support atoms for levels 1..top, skipping level `skip` (0 for none).
  const std::vector<Atom>& atoms(int top, int skip = 0) const;

  cplx mu_hat_direct(int k, const Veci& s) const;
  cplx mu_lk_hat_direct(int l, int k, const Veci& s) const;
  MuHat mu_hat(int k, const Veci& s, double t_max, std::size_t term_cap = 20'000'000) const;
  MuHat mu_lk_hat(int l, int k, const Veci& s, double t_max, std::size_t term_cap = 20'000'000) const;
  FourierArray mu_hat_array(int k, const Veci& lo, const Veci& hi) const;

  double ball_mass(int k, const Vecd& center, double radius) const;
  double total_mass(int k) const;
  std::vector<Vecd> sample_support(int k, int count, std::vector<std::string>* notes = nullptr) const;

  // Direct transform through cached per-atom 1D transforms on integer frequencies |u_i| <= R.
  void reserve_hat(int top, int skip, std::int64_t R) const;
  cplx mu_hat_fast(int top, int skip, const Veci& s) const;

  // Direct quadrature of F_k over the torus, for several frequencies at once.
  std::vector<cplx> Fk_hat_quadrature(int k, const std::vector<Veci>& s, int nodes = 64) const;

 private:
  struct TorusIndex {
    double cell = 0;
    std::int64_t cells = 0;
    std::map<std::vector<std::int64_t>, std::vector<std::pair<Vecd, double>>> buckets;  // center, weight
  };
  const TorusIndex& torus(int k) const;
  MuHat convolve_level(int k, const Veci& s, double t_max, std::size_t cap,
                       const std::function<cplx(const Veci&)>& inner, double inner_tail, bool certified) const;
  struct HatTable {
    std::int64_t R = -1;
    std::vector<double> weight;
    std::vector<std::vector<cplx>> f;  // [atom * d + i][u + R]
  };
  double phi0_tail(double R) const;
  cplx atom_hat(const Atom& a, const Veci& s) const;

  NumberField K_;
  const BumpFamily* bump_;
  int d_;
  double tau_, rho_;
  int N_;
  double M0_;
  std::vector<Level> levels_;
  std::vector<std::string> warnings_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<std::vector<Atom>>> atom_cache_;
  mutable std::map<int, std::unique_ptr<TorusIndex>> torus_cache_;
  mutable std::map<std::pair<int, int>, std::shared_ptr<const HatTable>> hat_cache_;
};

// Default growth policy M_{k+1} = ceil(M_k^{3/2}).
std::vector<double> growth_policy(double M1, int depth, double exponent = 1.5);

}  // namespace salem
