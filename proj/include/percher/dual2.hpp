#ifndef PERCHER_DUAL2_HPP
#define PERCHER_DUAL2_HPP

#include <Eigen/Dense>
#include <cmath>

// Forward-mode scalar carrying value, gradient and dense Hessian, used to
// evaluate exact second derivatives of the shooting and constraint maps.
// Only the operations those maps need are implemented.

namespace percher {

template <int N>
struct Dual2 {
  using Vec = Eigen::Matrix<double, N, 1>;
  using Mat = Eigen::Matrix<double, N, N>;

  double a = 0.0;
  Vec v = Vec::Zero();
  Mat h = Mat::Zero();

  Dual2() = default;
  Dual2(double value) : a(value) {}  // NOLINT: implicit by design
  Dual2(double value, int slot) : a(value) { v[slot] = 1.0; }

  Dual2& operator+=(const Dual2& o) {
    a += o.a;
    v += o.v;
    h += o.h;
    return *this;
  }
  Dual2& operator-=(const Dual2& o) {
    a -= o.a;
    v -= o.v;
    h -= o.h;
    return *this;
  }
  Dual2& operator*=(const Dual2& o) { return *this = *this * o; }
  Dual2& operator/=(const Dual2& o) { return *this = *this / o; }

  friend Dual2 operator-(const Dual2& x) {
    Dual2 r;
    r.a = -x.a;
    r.v = -x.v;
    r.h = -x.h;
    return r;
  }
  friend Dual2 operator+(const Dual2& x, const Dual2& y) {
    Dual2 r = x;
    r += y;
    return r;
  }
  friend Dual2 operator-(const Dual2& x, const Dual2& y) {
    Dual2 r = x;
    r -= y;
    return r;
  }
  friend Dual2 operator*(const Dual2& x, const Dual2& y) {
    Dual2 r;
    r.a = x.a * y.a;
    r.v = x.a * y.v + y.a * x.v;
    r.h = x.a * y.h + y.a * x.h + x.v * y.v.transpose() +
          y.v * x.v.transpose();
    return r;
  }
  friend Dual2 operator/(const Dual2& x, const Dual2& y) {
    return x * inverse(y);
  }

  friend Dual2 inverse(const Dual2& y) {
    const double ia = 1.0 / y.a;
    Dual2 r;
    r.a = ia;
    r.v = -ia * ia * y.v;
    r.h = -ia * ia * y.h + 2.0 * ia * ia * ia * y.v * y.v.transpose();
    return r;
  }

  friend bool operator<(const Dual2& x, const Dual2& y) { return x.a < y.a; }
  friend bool operator>(const Dual2& x, const Dual2& y) { return x.a > y.a; }
  friend bool operator<=(const Dual2& x, const Dual2& y) { return x.a <= y.a; }
  friend bool operator>=(const Dual2& x, const Dual2& y) { return x.a >= y.a; }
  friend bool operator==(const Dual2& x, const Dual2& y) { return x.a == y.a; }
  friend bool operator!=(const Dual2& x, const Dual2& y) { return x.a != y.a; }

  // chain rule for f(x): value fa, derivative fp, second derivative fpp
  static Dual2 compose(const Dual2& x, double fa, double fp, double fpp) {
    Dual2 r;
    r.a = fa;
    r.v = fp * x.v;
    r.h = fp * x.h + fpp * x.v * x.v.transpose();
    return r;
  }

  friend Dual2 sqrt(const Dual2& x) {
    const double s = std::sqrt(x.a);
    return compose(x, s, 0.5 / s, -0.25 / (s * x.a));
  }
  friend Dual2 atan(const Dual2& x) {
    const double den = 1.0 + x.a * x.a;
    return compose(x, std::atan(x.a), 1.0 / den,
                   -2.0 * x.a / (den * den));
  }
  friend Dual2 exp(const Dual2& x) {
    const double e = std::exp(x.a);
    return compose(x, e, e, e);
  }
  friend Dual2 log(const Dual2& x) {
    return compose(x, std::log(x.a), 1.0 / x.a, -1.0 / (x.a * x.a));
  }
  friend Dual2 abs(const Dual2& x) { return x.a < 0.0 ? -x : x; }
};

}  // namespace percher

namespace Eigen {

template <int N>
struct NumTraits<percher::Dual2<N>> : NumTraits<double> {
  using Real = percher::Dual2<N>;
  using NonInteger = percher::Dual2<N>;
  using Nested = percher::Dual2<N>;
  using Literal = double;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    ReadCost = 1,
    AddCost = N,
    MulCost = N * N,
    RequireInitialization = 1,
  };
};

}  // namespace Eigen

#endif  // PERCHER_DUAL2_HPP
