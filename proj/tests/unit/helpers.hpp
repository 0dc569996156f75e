#pragma once

#include <cmath>
#include <numbers>

#include "edgerec/material.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

inline edgerec::DomainWallSpec unit_weight() {
  edgerec::DomainWallSpec s;
  s.bulk.a0 = 1.0;
  s.bulk.C.setZero();
  s.delta = 0.0;
  return s;
}

inline edgerec::DomainWallSpec honeycomb(double a0, double delta,
                                         edgerec::PerturbationKind kind =
                                             edgerec::PerturbationKind::PBreaking) {
  edgerec::DomainWallSpec s;
  s.bulk.a0 = a0;
  s.bulk.C = -0.5 * edgerec::Mat2::Identity();
  s.perturbation.kind = kind;
  s.delta = delta;
  return s;
}

inline edgerec::DomainWallSpec testcase1() { return honeycomb(23.0, 6.0); }

inline edgerec::DomainWallSpec anisotropic() {
  edgerec::DomainWallSpec s = honeycomb(10.0, 1.0, edgerec::PerturbationKind::CBreaking);
  s.bulk.C << -1.0, 2.0, 0.0, -2.0;
  return s;
}

}  // namespace testing
