#include "salem/poly.hpp"

#include "salem/hnf.hpp"

#include <algorithm>
#include <random>

namespace salem {

int degree(const IntPoly& f) {
  int d = static_cast<int>(f.size()) - 1;
  while (d >= 0 && f[static_cast<std::size_t>(d)] == 0) --d;
  return d;
}

bool is_monic(const IntPoly& f) {
  int d = degree(f);
  return d >= 0 && f[static_cast<std::size_t>(d)] == 1;
}

IntPoly derivative(const IntPoly& f) {
  IntPoly r;
  for (std::size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * static_cast<long>(i));
  if (r.empty()) r.push_back(0);
  return r;
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  IntPoly r(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

IntPoly poly_rem_monic(const IntPoly& a, const IntPoly& b) {
  const int db = degree(b);
  IntPoly r = a;
  for (int k = degree(r); k >= db; --k) {
    Integer c = r[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k - db + j)] -= c * b[static_cast<std::size_t>(j)];
  }
  r.resize(static_cast<std::size_t>(std::max(db, 1)));
  return r;
}

Integer discriminant(const IntPoly& f) {
  const int n = degree(f);
  if (n < 1) throw DomainError("discriminant of a constant");
  if (n == 1) return 1;
  IntPoly g = derivative(f);
  const int m = n - 1;
  const int size = n + m;
  IntMat s = IntMat::Zero(size, size);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s(i, i + j) = f[static_cast<std::size_t>(n - j)];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s(m + i, i + j) = g[static_cast<std::size_t>(m - j)];
  Integer res = det_bareiss(s);
  // disc = (-1)^{n(n-1)/2} Res(f, f') for monic f
  return ((n * (n - 1) / 2) % 2 == 0) ? res : Integer(-res);
}

namespace {

Complex horner(const IntPoly& f, const Complex& z) {
  Complex acc(0);
  for (int k = degree(f); k >= 0; --k) acc = acc * z + Complex(Real(f[static_cast<std::size_t>(k)]));
  return acc;
}

}  // namespace

RootIsolation isolate_roots(const IntPoly& f) {
  const int n = degree(f);
  if (n < 1) throw DomainError("no roots for a constant polynomial");
  IntPoly df = derivative(f);
  Real bound = 0;
  for (int k = 0; k < n; ++k) bound = std::max(bound, Real(abs(f[static_cast<std::size_t>(k)])));
  bound += 1;
  std::vector<Complex> z(static_cast<std::size_t>(n));
  const Real two_pi = 2 * boost::math::constants::pi<Real>();
  for (int k = 0; k < n; ++k) {
    Real ang = two_pi * k / n + Real(0.4);
    Real rad = bound * Real(0.5 + 0.5 * (k + 1) / n);
    z[static_cast<std::size_t>(k)] = Complex(rad * cos(ang), rad * sin(ang));
  }
  const Real tol("1e-46");
  for (int iter = 0; iter < 2000; ++iter) {
    Real worst = 0;
    for (int k = 0; k < n; ++k) {
      const Complex zk = z[static_cast<std::size_t>(k)];
      Complex fz = horner(f, zk), dz = horner(df, zk);
      if (abs(fz) == 0) continue;
      Complex ratio = fz / dz;
      Complex sum(0);
      for (int j = 0; j < n; ++j)
        if (j != k) sum += Complex(1) / (zk - z[static_cast<std::size_t>(j)]);
      Complex w = ratio / (Complex(1) - ratio * sum);
      z[static_cast<std::size_t>(k)] = zk - w;
      worst = std::max(worst, Real(abs(w) / (1 + abs(zk))));
    }
    if (worst < tol) break;
  }
  RootIsolation out;
  std::vector<Real> rad(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const Complex zk = z[static_cast<std::size_t>(k)];
    Complex dz = horner(df, zk);
    if (abs(dz) == 0) throw DomainError("root-finding failed: repeated root");
    rad[static_cast<std::size_t>(k)] = n * abs(horner(f, zk)) / abs(dz);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (abs(z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]) <=
          rad[static_cast<std::size_t>(i)] + rad[static_cast<std::size_t>(j)])
        throw DomainError("root-finding failed to separate roots");
  Real maxr = 0;
  for (auto& r : rad) maxr = std::max(maxr, r);
  if (maxr > Real("1e-30")) throw DomainError("root-finding failed to reach 30 digits");
  // Sort: real roots first by value, then complex pairs by real part and imaginary part.
  std::sort(z.begin(), z.end(), [](const Complex& a, const Complex& b) {
    bool ra = abs(a.imag()) < Real("1e-25"), rb = abs(b.imag()) < Real("1e-25");
    if (ra != rb) return ra;
    if (abs(a.real() - b.real()) > Real("1e-25")) return a.real() < b.real();
    return a.imag() > b.imag();
  });
  out.roots = z;
  out.max_radius = maxr.convert_to<double>();
  return out;
}

bool is_irreducible(const IntPoly& f, const std::vector<Complex>& roots) {
  const int n = degree(f);
  if (n <= 1) return n == 1;
  if (n > 20) throw DomainError("irreducibility test limited to degree 20");
  const Real tol("1e-20");
  for (int k = 1; k <= n / 2; ++k) {
    std::vector<int> pick(static_cast<std::size_t>(n), 0);
    std::fill(pick.end() - k, pick.end(), 1);
    do {
      std::vector<Complex> c{Complex(1)};
      for (int i = 0; i < n; ++i) {
        if (!pick[static_cast<std::size_t>(i)]) continue;
        std::vector<Complex> nc(c.size() + 1, Complex(0));
        for (std::size_t j = 0; j < c.size(); ++j) {
          nc[j + 1] += c[j];
          nc[j] -= c[j] * roots[static_cast<std::size_t>(i)];
        }
        c = nc;
      }
      IntPoly g;
      bool integral = true;
      for (auto& cj : c) {
        Real re = cj.real(), im = cj.imag();
        Real rr = round(re);
        if (abs(im) > tol * (1 + abs(re)) || abs(re - rr) > tol * (1 + abs(re))) {
          integral = false;
          break;
        }
        g.push_back(rr.convert_to<Integer>());
      }
      if (integral) {
        IntPoly r = poly_rem_monic(f, g);
        if (std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; })) return false;
      }
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  return true;
}

std::vector<std::pair<Integer, int>> factor_integer(Integer n) {
  std::vector<std::pair<Integer, int>> out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  for (Integer p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  std::vector<char> comp(static_cast<std::size_t>(n + 1), 0);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (comp[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) comp[static_cast<std::size_t>(j)] = 1;
  }
  return out;
}

namespace fp {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % p);
}

std::int64_t inv(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, e = p - 2, b = mod(a, p);
  while (e > 0) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly sub(Poly a, const Poly& b, std::int64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = mod(a[i] - b[i], p);
  trim(a);
  return a;
}

Poly add(Poly a, const Poly& b, std::int64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = mod(a[i] + b[i], p);
  trim(a);
  return a;
}

Poly monic(Poly a, std::int64_t p) {
  if (a.empty()) return a;
  std::int64_t c = inv(a.back(), p);
  for (auto& x : a) x = mulmod(x, c, p);
  return a;
}

Poly powmod(Poly base, const Integer& e, const Poly& m, std::int64_t p) {
  Poly r{1};
  base = rem(base, m, p);
  const unsigned bits = e == 0 ? 0 : static_cast<unsigned>(mp::msb(e)) + 1;
  for (unsigned i = bits; i-- > 0;) {
    r = rem(mul(r, r, p), m, p);
    if (mp::bit_test(e, i)) r = rem(mul(r, base, p), m, p);
  }
  return rem(r, m, p);
}

Poly deriv(const Poly& a, std::int64_t p) {
  Poly r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(mulmod(a[i], static_cast<std::int64_t>(i) % p, p));
  trim(r);
  return r;
}

Poly pth_root(const Poly& a, std::int64_t p) {
  Poly r;
  for (std::size_t i = 0; i < a.size(); i += static_cast<std::size_t>(p)) r.push_back(a[i]);
  trim(r);
  return r;
}

// Squarefree decomposition: pairs (g, e) with f = prod g^e, g squarefree coprime.
std::vector<Factor> squarefree(const Poly& f, std::int64_t p) {
  std::vector<Factor> out;
  if (deg(f) <= 0) return out;
  Poly d = deriv(f, p);
  if (d.empty()) {
    for (auto& fc : squarefree(pth_root(f, p), p)) out.push_back({fc.g, fc.e * static_cast<int>(p)});
    return out;
  }
  Poly c = gcd(f, d, p);
  Poly w = quo(f, c, p);
  int i = 1;
  while (deg(w) > 0) {
    Poly y = gcd(w, c, p);
    Poly z = quo(w, y, p);
    if (deg(z) > 0) out.push_back({monic(z, p), i});
    ++i;
    w = y;
    c = quo(c, y, p);
  }
  if (deg(c) > 0)
    for (auto& fc : squarefree(pth_root(c, p), p)) out.push_back({fc.g, fc.e * static_cast<int>(p)});
  return out;
}

std::vector<std::pair<Poly, int>> distinct_degree(Poly f, std::int64_t p) {
  std::vector<std::pair<Poly, int>> out;
  Poly x{0, 1};
  Poly w = x;
  for (int i = 1; 2 * i <= deg(f); ++i) {
    w = powmod(w, Integer(p), f, p);
    Poly g = gcd(f, sub(w, x, p), p);
    if (deg(g) > 0) {
      out.emplace_back(g, i);
      f = quo(f, g, p);
      w = rem(w, f, p);
    }
  }
  if (deg(f) > 0) out.emplace_back(f, deg(f));
  return out;
}

void equal_degree(const Poly& g, int f, std::int64_t p, std::mt19937_64& rng, std::vector<Poly>& out) {
  const int n = deg(g);
  if (n == f) {
    out.push_back(monic(g, p));
    return;
  }
  std::uniform_int_distribution<std::int64_t> coef(0, p - 1);
  Integer pf = 1;
  for (int i = 0; i < f; ++i) pf *= p;
  for (;;) {
    Poly a(static_cast<std::size_t>(n));
    for (auto& c : a) c = coef(rng);
    trim(a);
    if (deg(a) <= 0) continue;
    Poly b;
    if (p == 2) {
      Poly s = a, t = a;
      for (int i = 1; i < f; ++i) {
        s = rem(mul(s, s, p), g, p);
        t = add(t, s, p);
      }
      b = t;
    } else {
      b = sub(powmod(a, (pf - 1) / 2, g, p), Poly{1}, p);
    }
    Poly h = gcd(g, b, p);
    if (deg(h) > 0 && deg(h) < n) {
      equal_degree(h, f, p, rng, out);
      equal_degree(quo(g, h, p), f, p, rng, out);
      return;
    }
  }
}

}  // namespace

int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

Poly reduce(const IntPoly& f, std::int64_t p) {
  Poly r;
  for (auto& c : f) {
    Integer m = c % p;
    if (m < 0) m += p;
    r.push_back(m.convert_to<std::int64_t>());
  }
  trim(r);
  return r;
}

IntPoly lift(const Poly& f) {
  IntPoly r;
  for (auto c : f) r.emplace_back(c);
  if (r.empty()) r.emplace_back(0);
  return r;
}

Poly mul(const Poly& a, const Poly& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = mod(r[i + j] + mulmod(a[i], b[j], p), p);
  trim(r);
  return r;
}

Poly rem(const Poly& a, const Poly& b, std::int64_t p) {
  if (b.empty()) throw DomainError("division by zero polynomial");
  Poly r = a;
  trim(r);
  const std::int64_t lead = inv(b.back(), p);
  while (deg(r) >= deg(b)) {
    std::int64_t c = mulmod(r.back(), lead, p);
    std::size_t shift = r.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] = mod(r[shift + j] - mulmod(c, b[j], p), p);
    trim(r);
  }
  return r;
}

Poly quo(const Poly& a, const Poly& b, std::int64_t p) {
  if (b.empty()) throw DomainError("division by zero polynomial");
  Poly r = a;
  trim(r);
  if (deg(r) < deg(b)) return {};
  Poly q(r.size() - b.size() + 1, 0);
  const std::int64_t lead = inv(b.back(), p);
  while (deg(r) >= deg(b)) {
    std::int64_t c = mulmod(r.back(), lead, p);
    std::size_t shift = r.size() - b.size();
    q[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] = mod(r[shift + j] - mulmod(c, b[j], p), p);
    trim(r);
  }
  trim(q);
  return q;
}

Poly gcd(Poly a, Poly b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}

std::vector<Factor> factor(const Poly& f0, std::int64_t p, std::uint64_t seed) {
  Poly f = f0;
  trim(f);
  if (deg(f) < 1) return {};
  f = monic(f, p);
  std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(p));
  std::vector<Factor> out;
  for (auto& sq : squarefree(f, p)) {
    for (auto& [g, dg] : distinct_degree(sq.g, p)) {
      std::vector<Poly> irr;
      equal_degree(g, dg, p, rng, irr);
      for (auto& h : irr) out.push_back({h, sq.e});
    }
  }
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
    if (a.g.size() != b.g.size()) return a.g.size() < b.g.size();
    return std::lexicographical_compare(a.g.rbegin(), a.g.rend(), b.g.rbegin(), b.g.rend());
  });
  return out;
}

}  // namespace fp

bool dedekind_maximal_at(const IntPoly& f, std::int64_t p) {
  auto facs = fp::factor(fp::reduce(f, p), p);
  fp::Poly g{1}, h{1};
  for (auto& fc : facs) {
    g = fp::mul(g, fc.g, p);
    for (int i = 1; i < fc.e; ++i) h = fp::mul(h, fc.g, p);
  }
  IntPoly gh = poly_mul(fp::lift(g), fp::lift(h));
  IntPoly diff(std::max(f.size(), gh.size()), Integer(0));
  for (std::size_t i = 0; i < f.size(); ++i) diff[i] += f[i];
  for (std::size_t i = 0; i < gh.size(); ++i) diff[i] -= gh[i];
  for (auto& c : diff) {
    if (c % p != 0) throw Error("Dedekind lift is not congruent mod p");
    c /= p;
  }
  fp::Poly F = fp::reduce(diff, p);
  fp::Poly t = fp::gcd(fp::gcd(F, g, p), h, p);
  return fp::deg(t) == 0;
}

}  // namespace salem
