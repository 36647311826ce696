#pragma once

#include <cmath>
#include <complex>

#include "cuspmass/eigenform.hpp"

namespace cuspmass::testing {

inline eigen::EigenOptions eigen_options() {
  eigen::EigenOptions o;
  o.cache_dir = eigen::default_cache_dir();
  return o;
}

inline eigen::EigenBasis basis(int k, eigen::i64 N = 80000) {
  return eigen::hecke_eigenbasis(k, N, eigen_options());
}

inline double rel_diff(double a, double b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / s;
}

inline double rel_diff(std::complex<double> a, std::complex<double> b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / s;
}

}  // namespace cuspmass::testing
