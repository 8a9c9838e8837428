#include "salem/idealalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace salem {

namespace {

IntVec int_product(const NumberField& K, const IntVec& a, const IntVec& b) {
  const int d = K.degree();
  IntVec r = IntVec::Zero(d);
  for (int i = 0; i < d; ++i) {
    if (a(i) == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (b(j) == 0) continue;
      Integer ab = a(i) * b(j);
      const IntVec& c = K.product(i, j);
      for (int k = 0; k < d; ++k)
        if (c(k) != 0) r(k) += ab * c(k);
    }
  }
  return r;
}

FieldElement row_element(const RatMat& b, Eigen::Index i) { return FieldElement(RatVec(b.row(i).transpose())); }

}  // namespace

std::string FracIdeal::to_string() const {
  std::ostringstream os;
  os << "{\"den\": " << den() << ", \"hnf\": [";
  for (Eigen::Index i = 0; i < hnf().rows(); ++i) {
    os << (i ? ", [" : "[");
    for (Eigen::Index j = 0; j < hnf().cols(); ++j) os << (j ? ", " : "") << hnf()(i, j);
    os << "]";
  }
  os << "]}";
  return os.str();
}

bool ideal_less(const FracIdeal& a, const FracIdeal& b) {
  Rational na = ideal_norm(a), nb = ideal_norm(b);
  if (na != nb) return na < nb;
  return lex_compare(a.lattice(), b.lattice()) < 0;
}

FracIdeal unit_ideal(const NumberField& K) {
  const int d = K.degree();
  return FracIdeal(lattice_from_rows(IntMat(IntMat::Identity(d, d))));
}

FracIdeal ideal_from_generators(const NumberField& K, const std::vector<FieldElement>& gens) {
  const int d = K.degree();
  if (gens.empty() || std::all_of(gens.begin(), gens.end(), [](const FieldElement& g) { return g.is_zero(); }))
    throw DomainError("ideal generators are all zero");
  RatMat rows(static_cast<Eigen::Index>(gens.size()) * d, d);
  Eigen::Index r = 0;
  for (auto& g : gens) {
    RatMat m = mult_matrix(K, g);  // column j = g * omega_j
    for (int j = 0; j < d; ++j) rows.row(r++) = m.col(j).transpose();
  }
  return FracIdeal(lattice_from_rows(rows));
}

FracIdeal ideal_mul(const NumberField& K, const FracIdeal& I, const FracIdeal& J) {
  const int d = K.degree();
  IntMat rows(d * d, d);
  Eigen::Index r = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      rows.row(r++) = int_product(K, IntVec(I.hnf().row(i).transpose()), IntVec(J.hnf().row(j).transpose())).transpose();
  return FracIdeal(lattice_from_rows(rows, Integer(I.den() * J.den())));
}

FracIdeal ideal_sum(const FracIdeal& I, const FracIdeal& J) { return FracIdeal(lattice_sum(I.lattice(), J.lattice())); }

FracIdeal ideal_intersect(const FracIdeal& I, const FracIdeal& J) {
  return FracIdeal(lattice_intersect(I.lattice(), J.lattice()));
}

FracIdeal ideal_scale(const FracIdeal& I, const Rational& q) {
  if (q == 0) throw DomainError("scaling an ideal by zero");
  RatMat b = I.basis();
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) *= q;
  return FracIdeal(lattice_from_rows(b));
}

Rational ideal_norm(const FracIdeal& I) { return I.lattice().covolume(); }

FracIdeal trace_dual(const NumberField& K, const FracIdeal& I) {
  RatMat bt = I.basis() * to_rational(K.trace_matrix());
  RatMat inv = inverse_exact(bt);
  return FracIdeal(lattice_from_rows(RatMat(inv.transpose())));
}

FracIdeal different_ideal(const NumberField& K) {
  static std::mutex mu;
  static std::map<std::vector<long>, FracIdeal> cache;
  const auto key = K.poly_coeffs();
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  FieldElement fp = poly_at_theta(K, derivative(K.polynomial()));
  FracIdeal delta = ideal_from_generators(K, {fp});
  FracIdeal delta_inv = ideal_from_generators(K, {elem_inverse(K, fp)});
  FracIdeal tinv(lattice_from_rows(K.trace_inverse()));
  if (!(delta_inv == tinv)) throw Error("different ideal cross-check failed: <1/f'(theta)> differs from T^{-1} Z^d");
  if (ideal_norm(delta) != Rational(abs(K.discriminant())))
    throw Error("different ideal norm differs from |disc|");
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, delta);
  return delta;
}

FracIdeal ideal_inverse(const NumberField& K, const FracIdeal& I) {
  return ideal_mul(K, trace_dual(K, I), different_ideal(K));
}

bool is_ok_module(const NumberField& K, const FracIdeal& I) {
  RatMat b = I.basis();
  const int d = K.degree();
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (int j = 0; j < d; ++j) {
      FieldElement w = FieldElement::zero(d);
      w.coords(j) = 1;
      if (!I.contains(elem_mul(K, row_element(b, i), w))) return false;
    }
  return true;
}

std::vector<PrimeIdealRecord> prime_ideals_above(const NumberField& K, std::int64_t p) {
  if (!is_prime(p)) throw DomainError("prime_ideals_above needs a rational prime");
  const IntPoly& f = K.polynomial();
  if (K.discriminant() % p == 0 && !dedekind_maximal_at(f, p))
    throw DomainError("power basis not maximal at p; Dedekind factorization invalid");
  std::vector<PrimeIdealRecord> out;
  const int d = K.degree();
  for (auto& fac : fp::factor(fp::reduce(f, p), p)) {
    FieldElement pe = FieldElement::zero(d);
    pe.coords(0) = Rational(p);
    FieldElement g = poly_at_theta(K, fp::lift(fac.g));
    PrimeIdealRecord rec;
    rec.ideal = ideal_from_generators(K, {pe, g});
    rec.p = p;
    rec.f = fp::deg(fac.g);
    rec.e = fac.e;
    Integer n = 1;
    for (int i = 0; i < rec.f; ++i) n *= p;
    if (ideal_norm(rec.ideal) != Rational(n)) throw Error("prime ideal norm mismatch");
    rec.norm = to_i64(n);
    out.push_back(rec);
  }
  std::sort(out.begin(), out.end(),
            [](const PrimeIdealRecord& a, const PrimeIdealRecord& b) { return ideal_less(a.ideal, b.ideal); });
  return out;
}

namespace {

std::vector<PrimeIdealRecord> primes_in_window(const NumberField& K, long double lo, long double hi) {
  std::vector<PrimeIdealRecord> out;
  if (hi < 2) return out;
  const int d = K.degree();
  const auto top = static_cast<std::int64_t>(std::floor(hi));
  for (std::int64_t p : primes_up_to(top)) {
    bool possible = false;
    long double q = 1;
    for (int f = 1; f <= d; ++f) {
      q *= static_cast<long double>(p);
      if (q >= lo && q <= hi) possible = true;
      if (q > hi) break;
    }
    if (!possible) continue;
    for (auto& rec : prime_ideals_above(K, p)) {
      auto n = static_cast<long double>(rec.norm);
      if (n >= lo && n <= hi) out.push_back(rec);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const PrimeIdealRecord& a, const PrimeIdealRecord& b) { return ideal_less(a.ideal, b.ideal); });
  return out;
}

}  // namespace

std::vector<PrimeIdealRecord> enumerate_Q(const NumberField& K, double M) {
  if (!(M > 1)) throw DomainError("enumerate_Q needs M > 1");
  long double hi = std::pow(static_cast<long double>(M), K.degree());
  return primes_in_window(K, hi / 2, hi);
}

std::vector<PrimeIdealRecord> prime_ideals_up_to(const NumberField& K, std::int64_t bound) {
  return primes_in_window(K, 1, static_cast<long double>(bound));
}

std::vector<FracIdeal> ideals_up_to(const NumberField& K, std::int64_t bound) {
  std::vector<FracIdeal> out;
  if (bound < 1) return out;
  auto primes = prime_ideals_up_to(K, bound);
  struct Gen {
    const NumberField& K;
    const std::vector<PrimeIdealRecord>& P;
    std::int64_t bound;
    std::vector<FracIdeal>& out;
    void run(std::size_t i, const FracIdeal& cur, std::int64_t n) {
      out.push_back(cur);
      for (std::size_t j = i; j < P.size(); ++j) {
        if (n * P[j].norm > bound) continue;
        run(j, ideal_mul(K, cur, P[j].ideal), n * P[j].norm);
      }
    }
  } gen{K, primes, bound, out};
  gen.run(0, unit_ideal(K), 1);
  std::sort(out.begin(), out.end(), ideal_less);
  return out;
}

std::vector<std::int64_t> ideal_norm_counts(const NumberField& K, std::int64_t bound) {
  std::vector<std::int64_t> a(static_cast<std::size_t>(std::max<std::int64_t>(bound, 1) + 1), 0);
  if (bound < 1) return a;
  a[1] = 1;
  for (std::int64_t p : primes_up_to(bound)) {
    std::vector<int> degs;
    for (auto& fac : fp::factor(fp::reduce(K.polynomial(), p), p)) degs.push_back(fp::deg(fac.g));
    int kmax = 0;
    for (std::int64_t q = p; q <= bound; q *= p) ++kmax;
    // c[k] = #{exponent vectors with sum f_i a_i = k}
    std::vector<std::int64_t> c(static_cast<std::size_t>(kmax + 1), 0);
    c[0] = 1;
    for (int f : degs)
      for (int k = f; k <= kmax; ++k) c[static_cast<std::size_t>(k)] += c[static_cast<std::size_t>(k - f)];
    for (std::int64_t n = bound / p; n >= 1; --n) {
      if (a[static_cast<std::size_t>(n)] == 0) continue;
      std::int64_t q = n;
      for (int k = 1; k <= kmax; ++k) {
        q *= p;
        if (q > bound) break;
        a[static_cast<std::size_t>(q)] += a[static_cast<std::size_t>(n)] * c[static_cast<std::size_t>(k)];
      }
    }
  }
  return a;
}

PrimeIdealRecord pick_J(const NumberField& K, double M, double rho) {
  const int d = K.degree();
  if (!(rho > -d && rho < d)) throw DomainError("pick_J needs -d < rho < d");
  long double hi = std::pow(static_cast<long double>(M), static_cast<long double>(d) + rho);
  auto cand = primes_in_window(K, hi / 2, hi);
  if (cand.empty()) throw DomainError("no prime ideal with norm in [M^{d+rho}/2, M^{d+rho}]; enlarge M");
  return cand.front();
}

std::optional<CrtSolution> crt_intersect_cosets(const NumberField& K, const FracIdeal& D, const FracIdeal& I1,
                                                const FracIdeal& I2, const FieldElement& a1, const FieldElement& a2) {
  if (!D.contains(a1) || !D.contains(a2)) throw DomainError("CRT residues must lie in D");
  const int d = K.degree();
  FracIdeal S = ideal_sum(I1, I2);
  FracIdeal DS = ideal_mul(K, D, S);
  if (!DS.contains(a1 - a2)) return std::nullopt;

  FracIdeal Sinv = ideal_inverse(K, S);
  RatMat A = ideal_mul(K, Sinv, I1).basis();
  RatMat B = ideal_mul(K, Sinv, I2).basis();
  RatMat stacked(2 * d, d);
  stacked << A, B;
  Integer L = 1;
  for (Eigen::Index i = 0; i < stacked.rows(); ++i)
    for (Eigen::Index j = 0; j < d; ++j) L = mp::lcm(L, Integer(mp::denominator(stacked(i, j))));
  IntMat R(2 * d, d);
  for (Eigen::Index i = 0; i < stacked.rows(); ++i)
    for (Eigen::Index j = 0; j < d; ++j) R(i, j) = mp::numerator(stacked(i, j) * Rational(L));
  HermiteWithTransform hw = hermite_form_with_transform(R);
  // Solve c' H = L e_0 by forward substitution on the upper-triangular H.
  IntVec target = IntVec::Zero(d);
  target(0) = L;
  IntVec cp(d);
  for (int j = 0; j < d; ++j) {
    Integer acc = target(j);
    for (int i = 0; i < j; ++i) acc -= cp(i) * hw.H(i, j);
    if (acc % hw.H(j, j) != 0) throw Error("CRT: 1 not in S^{-1}I1 + S^{-1}I2");
    cp(j) = acc / hw.H(j, j);
  }
  IntVec c = IntVec::Zero(2 * d);
  for (int j = 0; j < 2 * d; ++j)
    for (int i = 0; i < d; ++i) c(j) += cp(i) * hw.U(i, j);
  FieldElement x1 = FieldElement::zero(d), x2 = FieldElement::zero(d);
  for (int i = 0; i < d; ++i) {
    x1 = x1 + Rational(c(i)) * row_element(A, i);
    x2 = x2 + Rational(c(d + i)) * row_element(B, i);
  }
  if (!(x1 + x2 == FieldElement::one(d))) throw Error("CRT: x1 + x2 != 1");

  CrtSolution sol;
  sol.a = elem_mul(K, x1, a2) + elem_mul(K, x2, a1);
  sol.L = ideal_intersect(ideal_mul(K, D, I1), ideal_mul(K, D, I2));
  RatMat lb = sol.L.basis();
  for (int j = 0; j < d; ++j) {
    Integer q = floor_div(sol.a.coords(j) / lb(j, j));
    if (q != 0) sol.a = sol.a - Rational(q) * row_element(lb, j);
  }
  return sol;
}

DivisorCount divisor_count(const NumberField& K, const FracIdeal& J, double M) {
  if (!J.is_integral()) throw DomainError("divisor_count needs an integral ideal");
  DivisorCount out;
  for (auto& rec : enumerate_Q(K, M))
    if (rec.ideal.contains(J)) ++out.count;
  const double nj = to_double(ideal_norm(J));
  const double dl = K.degree() * std::log(M);
  out.literal_bound = std::log(2 * nj) / dl;
  out.corrected_bound = dl > std::log(2.0) ? std::log(nj) / (dl - std::log(2.0)) : INFINITY;
  out.literal_holds = out.count <= out.literal_bound + 1e-12;
  out.corrected_holds = out.count <= out.corrected_bound + 1e-12;
  return out;
}

}  // namespace salem
