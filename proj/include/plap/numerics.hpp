#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace plap {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct RangeError : std::range_error {
  using std::range_error::range_error;
};

struct BranchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
  double best;
  double error_estimate;
  QuadratureError(const std::string& what, double b, double e)
      : std::runtime_error(what), best(b), error_estimate(e) {}
};

// Truncated second-order number: value + d1*e1 + d2*e2 + d1d2*e1e2, e1^2 = e2^2 = 0.
struct HyperDual {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d1d2 = 0.0;

  constexpr HyperDual() = default;
  constexpr HyperDual(double v) : value(v) {}
  constexpr HyperDual(double v, double a, double b, double ab) : value(v), d1(a), d2(b), d1d2(ab) {}

  HyperDual& operator+=(const HyperDual& o) {
    value += o.value; d1 += o.d1; d2 += o.d2; d1d2 += o.d1d2;
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) {
    value -= o.value; d1 -= o.d1; d2 -= o.d2; d1d2 -= o.d1d2;
    return *this;
  }
  HyperDual& operator*=(const HyperDual& o);
  HyperDual& operator/=(const HyperDual& o);
};

// Apply a scalar function given its value and first two derivatives at x.value.
inline HyperDual chain(const HyperDual& x, double g0, double g1, double g2) {
  return {g0, g1 * x.d1, g1 * x.d2, g1 * x.d1d2 + g2 * x.d1 * x.d2};
}

inline HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
inline HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }
inline HyperDual operator-(const HyperDual& a) { return {-a.value, -a.d1, -a.d2, -a.d1d2}; }

inline HyperDual operator*(const HyperDual& a, const HyperDual& b) {
  return {a.value * b.value,
          a.value * b.d1 + a.d1 * b.value,
          a.value * b.d2 + a.d2 * b.value,
          a.value * b.d1d2 + a.d1 * b.d2 + a.d2 * b.d1 + a.d1d2 * b.value};
}

HyperDual operator/(const HyperDual& a, const HyperDual& b);

inline HyperDual& HyperDual::operator*=(const HyperDual& o) { return *this = *this * o; }
inline HyperDual& HyperDual::operator/=(const HyperDual& o) { return *this = *this / o; }

inline bool operator<(const HyperDual& a, const HyperDual& b) { return a.value < b.value; }
inline bool operator>(const HyperDual& a, const HyperDual& b) { return a.value > b.value; }

HyperDual exp(const HyperDual& x);
HyperDual log(const HyperDual& x);
// ln|x|, derivative 1/x
HyperDual log_abs(const HyperDual& x);
HyperDual sqrt(const HyperDual& x);
HyperDual pow(const HyperDual& x, double p);
// sign(x)|x|^p, the odd extension of x^p
HyperDual signed_pow(const HyperDual& x, double p);
HyperDual sin(const HyperDual& x);
HyperDual cos(const HyperDual& x);
HyperDual tan(const HyperDual& x);
HyperDual atan(const HyperDual& x);
HyperDual sinh(const HyperDual& x);
HyperDual cosh(const HyperDual& x);
HyperDual abs(const HyperDual& x);

using ScalarFn = std::function<HyperDual(const HyperDual&)>;
using MultiFn = std::function<HyperDual(std::span<const HyperDual>)>;

// Partial derivative of order <= 2 given as a multi-index, e.g. {1,1} = d2/dx0dx1.
double differentiate(const MultiFn& f, std::span<const double> point, std::span<const int> orders);

// Value, gradient and Hessian of an N-argument function.
template <std::size_t N>
struct Partials {
  double v = 0.0;
  std::array<double, N> g{};
  std::array<std::array<double, N>, N> H{};
};

template <std::size_t N, class F>
Partials<N> partials(const F& f, const std::array<double, N>& x) {
  Partials<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i; j < N; ++j) {
      std::array<HyperDual, N> a;
      for (std::size_t k = 0; k < N; ++k) a[k] = HyperDual(x[k]);
      a[i].d1 = 1.0;
      a[j].d2 = 1.0;
      HyperDual y = f(a);
      out.v = y.value;
      out.g[i] = y.d1;
      out.g[j] = y.d2;
      out.H[i][j] = out.H[j][i] = y.d1d2;
    }
  }
  return out;
}

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-10, std::size_t max_intervals = 4000);

double invert_monotone(const ScalarFn& h, double y, std::pair<double, double> bracket,
                       double tol = 1e-12);

double upper_incomplete_gamma(double q, double z);

// Finite-difference weights (Fornberg) for derivative `order` at x0 on arbitrary nodes.
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order);

}  // namespace plap
