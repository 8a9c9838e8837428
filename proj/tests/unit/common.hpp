#pragma once

#include "salem/analyze.hpp"

#include <doctest.h>

namespace salem::test {

inline NumberField field(std::initializer_list<long> c, bool assume = false) {
  IntPoly p;
  for (long x : c) p.push_back(Integer(x));
  return NumberField::from_polynomial(p, assume);
}

inline const NumberField& gaussian() {
  static const NumberField K = field({1, 0, 1});
  return K;
}

inline FieldElement elem(std::initializer_list<long> c) { return FieldElement::from_ints(std::vector<long>(c)); }

inline Veci veci(std::initializer_list<std::int64_t> c) {
  Veci v(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (auto x : c) v(i++) = x;
  return v;
}

}  // namespace salem::test
