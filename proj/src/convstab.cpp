#include "salem/analyze.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace salem {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic value in [0.5, 1] per (seed, salt, t).
double magnitude(std::uint64_t seed, std::uint64_t salt, const Veci& t) {
  std::uint64_t h = splitmix(seed ^ (salt * 0x632be59bd9b4e019ULL));
  for (Eigen::Index i = 0; i < t.size(); ++i) h = splitmix(h ^ static_cast<std::uint64_t>(t(i)));
  return 0.5 + 0.5 * static_cast<double>(h >> 11) * 0x1.0p-53;
}

double radius(const Veci& t) { return std::sqrt(static_cast<double>(t.squaredNorm())); }

struct Support {
  std::vector<Veci> u;
  std::vector<double> h;
};

Support h_support(const ConvInstance& inst, double (*H)(const ConvInstance&, const Veci&)) {
  Support s;
  const double R = inst.H_radius > 0 ? inst.H_radius : 2 * inst.A;
  const std::int64_t r = static_cast<std::int64_t>(std::ceil(R));
  Veci t = Veci::Constant(inst.d, -r);
  while (true) {
    const double v = H(inst, t);
    if (v != 0) {
      s.u.push_back(t);
      s.h.push_back(v);
    }
    int j = inst.d - 1;
    while (j >= 0 && ++t(j) > r) t(j--) = -r;
    if (j < 0) break;
  }
  return s;
}

// Points on rings of geometric radii in [lo, hi], several directions each.
std::vector<Veci> ring_samples(int d, double lo, double hi, int radii, int angles) {
  std::vector<Veci> out;
  for (int i = 0; i < radii; ++i) {
    const double r = radii == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (radii - 1));
    for (int a = 0; a < angles; ++a) {
      Vecd dir = Vecd::Zero(d);
      const double th = 2 * M_PI * (a + 0.5 * (i % 2)) / angles;
      dir(0) = std::cos(th);
      if (d > 1) dir(1) = std::sin(th);
      Veci s(d);
      for (int j = 0; j < d; ++j) s(j) = static_cast<std::int64_t>(std::llround(r * dir(j)));
      if (radius(s) >= lo - 1e-9) out.push_back(s);
    }
  }
  return out;
}

}  // namespace

double conv_L(double x) { return x > 1 ? std::log(x) : 0.0; }

double conv_G(const ConvInstance& inst, const Veci& t) {
  const std::int64_t r2 = t.squaredNorm();
  if (r2 == 0) return 1;
  if (inst.delta_G) return 0;
  const double r = std::sqrt(static_cast<double>(r2));
  if (r <= inst.A) return 0;
  double u = magnitude(inst.seed, 1, t);
  if (r < inst.A + 1 || (r >= inst.B && r < inst.B + 1)) u = 1;
  double v = inst.D * conv_L(r) * u;
  if (r >= inst.B) v *= std::pow(inst.B / r, inst.N);
  return v;
}

double conv_H(const ConvInstance& inst, const Veci& t) {
  const std::int64_t r2 = t.squaredNorm();
  if (r2 == 0) return 1;
  const double r = std::sqrt(static_cast<double>(r2));
  const double R = inst.H_radius > 0 ? inst.H_radius : 2 * inst.A;
  if (r > R) return 0;
  return inst.CH * magnitude(inst.seed, 2, t) * std::pow(r, -(inst.N - inst.d)) * conv_L(r);
}

ConvInstance conv_default(double A, double B, std::uint64_t seed) {
  ConvInstance c;
  c.A = A;
  c.B = B;
  c.D = 1 / (2 * conv_L(8 * B));
  c.seed = seed;
  c.H_radius = 2 * A;
  return c;
}

std::string conv_validate(const ConvInstance& inst, double (*H)(const ConvInstance&, const Veci&)) {
  const int d = inst.d, N = inst.N;
  if (!(N > 2 * d + 2 * inst.a)) return "N must exceed 2d + 2a";
  if (!(inst.A >= 1 && inst.A <= inst.B)) return "needs 1 <= A <= B";
  if (!(std::pow(inst.B, -(N - d)) <= std::pow(inst.A, -(N - d)) && std::pow(inst.A, -(N - d)) <= inst.D))
    return "needs B^{-(N-d)} <= A^{-(N-d)} <= D";
  const double R = inst.H_radius > 0 ? inst.H_radius : 2 * inst.A;
  const std::int64_t r = static_cast<std::int64_t>(std::ceil(R)) + 2;
  const double slack = 1 + 1e-12;
  Veci t = Veci::Constant(d, -r);
  while (true) {
    const double rad = radius(t);
    const double h = std::abs(H(inst, t));
    if (rad >= 1 && h > inst.CH * std::pow(rad, -(N - d)) * conv_L(rad) * slack) {
      std::ostringstream os;
      os << "H exceeds C_H |s|^{-(N-d)} L(|s|) at |s| = " << rad;
      return os.str();
    }
    if (rad > R && h != 0) return "H is nonzero beyond H_radius";
    int j = d - 1;
    while (j >= 0 && ++t(j) > r) t(j--) = -r;
    if (j < 0) break;
  }
  if (conv_G(inst, Veci::Zero(d)) != 1) return "G(0) must be 1";
  for (auto& s : ring_samples(d, 1, 4 * inst.B, 200, 24)) {
    const double g = std::abs(conv_G(inst, s)), rad = radius(s);
    if (g > 1) return "|G| exceeds G(0)";
    if (rad >= 1 && rad <= inst.A && g != 0) return "G is nonzero on 1 <= |s| <= A";
    if (rad >= inst.A && g > inst.D * conv_L(rad) * slack) return "G exceeds D L(|s|)";
    if (rad >= inst.B && g > inst.D * std::pow(inst.B / rad, N) * conv_L(rad) * slack)
      return "G exceeds D (B/|s|)^N L(|s|)";
  }
  return "";
}

LemmaReport convstab_check(const ConvInstance& inst, double (*H)(const ConvInstance&, const Veci&)) {
  const auto t0 = std::chrono::steady_clock::now();
  LemmaReport r;
  r.id = "convstab";
  std::ostringstream inst_name;
  inst_name << "d=" << inst.d << " N=" << inst.N << " a=" << inst.a << " A=" << inst.A << " B=" << inst.B
            << " D=" << inst.D << (inst.delta_G ? " G=delta" : "");
  r.instance = inst_name.str();
  const std::string bad = conv_validate(inst, H);
  if (!bad.empty()) {
    r.computed["hypotheses"] = bad;
    r.pass = false;
    return r;
  }
  const int d = inst.d, N = inst.N;
  const Support S = h_support(inst, H);
  const double A = inst.A, B = inst.B, D = inst.D;
  const double A2 = A * A;
  std::ostringstream csv;
  csv.precision(17);
  csv << "conclusion,";
  for (int j = 0; j < d; ++j) csv << "s" << j + 1 << ",";
  csv << "abs_s,value,bound\n";
  auto row = [&](int c, const Veci& s, double v, double b) {
    csv << c << ",";
    for (int j = 0; j < d; ++j) csv << s(j) << ",";
    csv << radius(s) << "," << v << "," << b << "\n";
  };
  // (1) |G*H(s) - H(s)| = |sum_{t != 0} G(t) H(s - t)| for every |s| <= A/2.
  const double b1 = std::pow(A, -(N - 2 * d)) * conv_L(A / 2);
  double c1 = 0, max1 = 0;
  std::int64_t n1 = 0;
  {
    const std::int64_t h = static_cast<std::int64_t>(std::floor(A / 2));
    Veci s = Veci::Constant(d, -h);
    while (true) {
      if (radius(s) <= A / 2) {
        double diff = 0;
        for (std::size_t i = 0; i < S.u.size(); ++i) {
          const Veci t = s - S.u[i];
          const std::int64_t t2 = t.squaredNorm();
          if (t2 == 0 || static_cast<double>(t2) <= A2) continue;
          diff += conv_G(inst, t) * S.h[i];
        }
        diff = std::abs(diff);
        ++n1;
        max1 = std::max(max1, diff);
        c1 = std::max(c1, diff / b1);
        if (diff > 0) row(1, s, diff, b1);
      }
      int j = d - 1;
      while (j >= 0 && ++s(j) > h) s(j--) = -h;
      if (j < 0) break;
    }
  }
  auto conv_at = [&](const Veci& s) {
    double acc = 0;
    for (std::size_t i = 0; i < S.u.size(); ++i) acc += S.h[i] * conv_G(inst, Veci(s - S.u[i]));
    return acc;
  };
  // (2) |G*H(s)| <= D L(2|s|) for |s| >= A/2.
  double c2 = 0;
  auto s2 = ring_samples(d, A / 2, 4 * B, 48, 16);
  for (double e : {A, A + 0.5, B, B + 0.5}) {
    auto extra = ring_samples(d, e, e, 1, 16);
    s2.insert(s2.end(), extra.begin(), extra.end());
  }
  for (auto& s : s2) {
    const double v = std::abs(conv_at(s)), b = D * conv_L(2 * radius(s));
    c2 = std::max(c2, v / b);
    row(2, s, v, b);
  }
  // (3) |G*H(s)| <= D (B/|s|)^{N-d} L(|s|/2) for |s| >= 2B.
  double c3 = 0;
  auto s3 = ring_samples(d, 2 * B, 8 * B, 24, 16);
  for (auto& s : s3) {
    const double rad = radius(s);
    const double v = std::abs(conv_at(s)), b = D * std::pow(B / rad, N - d) * conv_L(rad / 2);
    c3 = std::max(c3, v / b);
    row(3, s, v, b);
  }
  r.computed = {{"H_support", S.u.size()},
                {"conclusion1", {{"points", n1}, {"max_abs_diff", max1}, {"bound", b1}, {"C1", c1}}},
                {"conclusion2", {{"points", s2.size()}, {"C2", c2}}},
                {"conclusion3", {{"points", s3.size()}, {"C3", c3}}}};
  r.bounds = {{"1", "A^{-(N-2d)} L(A/2), |s| <= A/2"}, {"2", "D L(2|s|), |s| >= A/2"},
              {"3", "D (B/|s|)^{N-d} L(|s|/2), |s| >= 2B"}};
  r.fitted_constant = std::max({c1, c2, c3});
  r.pass = std::isfinite(c1) && std::isfinite(c2) && std::isfinite(c3) && (!inst.delta_G || max1 == 0);
  r.csv = csv.str();
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace salem
