#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace cuspmass::osc {

/// Truncated Taylor series c_0 + c_1 ε + ... + c_n εⁿ around a fixed point.
template <class T>
class Jet {
 public:
  explicit Jet(std::size_t order = 0) : c_(order + 1, T(0)) {}
  Jet(std::size_t order, T value) : c_(order + 1, T(0)) { c_[0] = value; }
  /// The jet of the identity map t ↦ t at t = t0.
  static Jet variable(std::size_t order, T t0) {
    Jet j(order, t0);
    if (order >= 1) j.c_[1] = T(1);
    return j;
  }
  /// From derivatives f^{(j)}(t0), j = 0..order.
  template <class Seq>
  static Jet from_derivatives(const Seq& d, std::size_t order) {
    Jet j(order);
    double fact = 1.0;
    for (std::size_t i = 0; i <= order; ++i) {
      if (i > 0) fact *= static_cast<double>(i);
      j.c_[i] = T(d[i]) / fact;
    }
    return j;
  }

  std::size_t order() const { return c_.size() - 1; }
  T& operator[](std::size_t i) { return c_[i]; }
  const T& operator[](std::size_t i) const { return c_[i]; }
  /// j-th derivative at the expansion point.
  T derivative(std::size_t j) const {
    double fact = 1.0;
    for (std::size_t i = 2; i <= j; ++i) fact *= static_cast<double>(i);
    return c_[j] * fact;
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(T s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, T s) { return a *= s; }
  friend Jet operator*(T s, Jet a) { return a *= s; }
  friend Jet operator-(Jet a) { return a *= T(-1); }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.order());
    for (std::size_t i = 0; i < r.c_.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) r.c_[i] += a.c_[j] * b.c_[i - j];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r(a.order());
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
      T s = a.c_[i];
      for (std::size_t j = 1; j <= i; ++j) s -= b.c_[j] * r.c_[i - j];
      r.c_[i] = s / b.c_[0];
    }
    return r;
  }
  friend Jet exp(const Jet& a) {
    Jet r(a.order());
    r.c_[0] = std::exp(a.c_[0]);
    for (std::size_t n = 1; n < r.c_.size(); ++n) {
      T s(0);
      for (std::size_t j = 1; j <= n; ++j) s += static_cast<double>(j) * a.c_[j] * r.c_[n - j];
      r.c_[n] = s / static_cast<double>(n);
    }
    return r;
  }

 private:
  std::vector<T> c_;
};

}  // namespace cuspmass::osc
