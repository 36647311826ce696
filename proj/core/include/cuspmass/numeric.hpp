#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace cuspmass::numeric {

using cplx = std::complex<double>;

/// Gauss–Legendre rule on [-1, 1]; nodes ascending. Cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// ∫_a^b f using a composite Gauss rule with `panels` equal panels.
double integrate_gauss(const std::function<double(double)>& f, double a, double b, int order,
                       int panels = 1);

/// Pairwise (cascade) summation; order of additions depends only on the size.
double pairwise_sum(const double* data, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }
cplx pairwise_sum(const std::vector<cplx>& v);

/// Process-wide worker count used by parallel helpers (default 1).
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous blocks; callers
/// write results by index, so output never depends on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cuspmass::numeric
