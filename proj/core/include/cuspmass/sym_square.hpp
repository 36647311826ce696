#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "cuspmass/eigenform.hpp"

namespace cuspmass::eigen {

/// λ(n²) for 1 ≤ n ≤ nmax (index 0 unused); needs λ(p) for p ≤ nmax.
std::vector<long double> lambda_of_squares(const HeckeEigenform& f, i64 nmax);

/// A(m, n) for the symmetric-square lift of f (uncached).
double sym_square_A(const HeckeEigenform& f, i64 m, i64 n);

/// Lazily filled A(m, n) table with A(n, 1) precomputed up to `row_limit`.
class SymSquareCoefficients {
 public:
  SymSquareCoefficients(std::shared_ptr<const HeckeEigenform> parent, i64 row_limit);

  const HeckeEigenform& parent() const { return *parent_; }
  i64 row_limit() const { return row_limit_; }
  /// A(n, 1) = A(1, n).
  double first_row(i64 n) const;
  double A(i64 m, i64 n) const;

 private:
  std::shared_ptr<const HeckeEigenform> parent_;
  i64 row_limit_;
  std::vector<double> row_;  // A(n,1), n ≤ row_limit
  mutable std::mutex mu_;
  mutable std::map<std::pair<i64, i64>, double> cache_;
};

}  // namespace cuspmass::eigen
