#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>

#include "fcontact/errors.hpp"

namespace fcontact {

/// Hard cap on chart dimension. Gradients of dual numbers are stored in a
/// fixed-capacity Eigen vector so that dual arithmetic never allocates.
inline constexpr int kMaxChartDim = 16;

/// First-order dual number: a value together with its gradient with respect
/// to the chart coordinates. Arithmetic implements the exact product, quotient
/// and chain rules, so partial derivatives are exact up to rounding.
///
/// A default-constructed or double-constructed Dual is a constant: its
/// gradient is empty and is treated as zero against any operand.
class Dual {
 public:
  using Grad = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxChartDim, 1>;

  Dual() = default;
  Dual(double v) : v_(v) {}  // NOLINT: implicit by design (constants)
  Dual(double v, Grad g) : v_(v), g_(std::move(g)) {}

  /// The i-th coordinate of an n-dimensional chart: value v, gradient e_i.
  static Dual variable(double v, int i, int n) {
    Grad g = Grad::Zero(n);
    g[i] = 1.0;
    return Dual(v, std::move(g));
  }

  double value() const { return v_; }

  /// Gradient materialized at dimension n (constants expand to zeros).
  Grad grad(int n) const {
    if (g_.size() == 0) return Grad::Zero(n);
    return g_;
  }

  bool is_constant() const { return g_.size() == 0; }

  Dual operator-() const { return Dual(-v_, -g_); }

  friend Dual operator+(const Dual& a, const Dual& b) {
    return Dual(a.v_ + b.v_, combine(1.0, a.g_, 1.0, b.g_));
  }
  friend Dual operator-(const Dual& a, const Dual& b) {
    return Dual(a.v_ - b.v_, combine(1.0, a.g_, -1.0, b.g_));
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return Dual(a.v_ * b.v_, combine(b.v_, a.g_, a.v_, b.g_));
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    if (b.v_ == 0.0) throw DomainError("division by zero");
    const double inv = 1.0 / b.v_;
    return Dual(a.v_ * inv, combine(inv, a.g_, -a.v_ * inv * inv, b.g_));
  }

  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }

  // Value-only comparisons; used by generic algorithms, never by AD itself.
  friend bool operator==(const Dual& a, const Dual& b) {
    return a.v_ == b.v_;
  }
  friend bool operator!=(const Dual& a, const Dual& b) { return !(a == b); }
  friend bool operator<(const Dual& a, const Dual& b) { return a.v_ < b.v_; }

  /// Chain rule for a scalar function u: (u(v), u'(v) * grad).
  Dual chain(double value, double derivative) const {
    if (g_.size() == 0) return Dual(value);
    return Dual(value, derivative * g_);
  }

 private:
  // c_a * a + c_b * b with empty gradients acting as zero.
  static Grad combine(double ca, const Grad& a, double cb, const Grad& b) {
    if (a.size() == 0 && b.size() == 0) return Grad();
    if (a.size() == 0) return cb * b;
    if (b.size() == 0) return ca * a;
    return ca * a + cb * b;
  }

  double v_ = 0.0;
  Grad g_;
};

inline Dual sin(const Dual& x) {
  return x.chain(std::sin(x.value()), std::cos(x.value()));
}

inline Dual cos(const Dual& x) {
  return x.chain(std::cos(x.value()), -std::sin(x.value()));
}

inline Dual exp(const Dual& x) {
  const double e = std::exp(x.value());
  return x.chain(e, e);
}

/// Integer power by repeated squaring; x^2 evaluates exactly as x*x.
template <class S>
S ipow(const S& x, int k) {
  if (k < 0) return S(1.0) / ipow(x, -k);
  S acc(1.0);
  S base = x;
  int e = k;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

template <>
inline double ipow<double>(const double& x, int k) {
  if (k < 0) {
    if (x == 0.0) throw DomainError("zero raised to a negative power");
    return 1.0 / ipow(x, -k);
  }
  double acc = 1.0;
  double base = x;
  int e = k;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

}  // namespace fcontact

namespace Eigen {

/// Allows Eigen dense matrices/vectors over Dual scalars (used by the
/// closure-composed tensors of the deformation operations).
template <>
struct NumTraits<fcontact::Dual> : NumTraits<double> {
  using Real = fcontact::Dual;
  using NonInteger = fcontact::Dual;
  using Nested = fcontact::Dual;
  using Literal = double;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2 * fcontact::kMaxChartDim,
    MulCost = 3 * fcontact::kMaxChartDim,
  };
  static inline fcontact::Dual epsilon() {
    return fcontact::Dual(NumTraits<double>::epsilon());
  }
  static inline fcontact::Dual dummy_precision() {
    return fcontact::Dual(NumTraits<double>::dummy_precision());
  }
};

}  // namespace Eigen
