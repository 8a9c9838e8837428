#include "common.hpp"

#include <cmath>

using namespace salem;
using namespace salem::test;

namespace {

double heavy_H(const ConvInstance& inst, const Veci& t) { return 2 * conv_H(inst, t); }

double wide_H(const ConvInstance& inst, const Veci& t) {
  ConvInstance wide = inst;
  wide.H_radius = 4 * inst.A;
  return t.squaredNorm() > 0 ? 0.5 * conv_H(wide, t) : conv_H(wide, t);
}

}  // namespace

TEST_CASE("log weight") {
  CHECK(conv_L(0.5) == 0);
  CHECK(conv_L(1) == 0);
  CHECK(conv_L(std::exp(1.0)) == doctest::Approx(1));
}

TEST_CASE("small instance against brute-force convolution") {
  ConvInstance inst = conv_default(8, 32, 5);
  CHECK(conv_validate(inst).empty());
  auto r = convstab_check(inst);
  CHECK(r.pass);
  const std::int64_t A = 8, box = 3 * A;
  double max1 = 0;
  for (std::int64_t s0 = -A / 2; s0 <= A / 2; ++s0)
    for (std::int64_t s1 = -A / 2; s1 <= A / 2; ++s1) {
      if (4 * (s0 * s0 + s1 * s1) > A * A) continue;
      double acc = 0;
      for (std::int64_t t0 = -box; t0 <= box; ++t0)
        for (std::int64_t t1 = -box; t1 <= box; ++t1) {
          if (t0 * t0 + t1 * t1 <= A * A) continue;
          acc += conv_G(inst, veci({t0, t1})) * conv_H(inst, veci({s0 - t0, s1 - t1}));
        }
      max1 = std::max(max1, std::abs(acc));
    }
  const double got = r.computed["conclusion1"]["max_abs_diff"].get<double>();
  CHECK(got == doctest::Approx(max1).epsilon(1e-12));
}

TEST_CASE("delta G leaves H unchanged") {
  ConvInstance inst = conv_default(8, 32, 5);
  inst.delta_G = true;
  auto r = convstab_check(inst);
  CHECK(r.pass);
  CHECK(r.computed["conclusion1"]["max_abs_diff"].get<double>() == 0);
}

TEST_CASE("hypothesis violations are reported") {
  ConvInstance inst = conv_default(8, 32, 5);
  CHECK(conv_validate(inst, heavy_H).find("H exceeds") != std::string::npos);
  CHECK_FALSE(convstab_check(inst, heavy_H).pass);
  CHECK(conv_validate(inst, wide_H).find("beyond H_radius") != std::string::npos);
  ConvInstance lowN = inst;
  lowN.N = 5;
  CHECK(conv_validate(lowN).find("N must exceed") != std::string::npos);
  ConvInstance lowD = inst;
  lowD.D = 0;
  CHECK_FALSE(conv_validate(lowD).empty());
  ConvInstance order = inst;
  order.A = 64;
  CHECK_FALSE(conv_validate(order).empty());
}
