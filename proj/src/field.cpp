#include "plap/field.hpp"

#include <algorithm>
#include <cmath>

namespace plap {

std::vector<double> Grid::nodes() const {
  std::vector<double> r(N);
  for (std::size_t i = 0; i < N; ++i) r[i] = this->r(i);
  return r;
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(slices.size());
  for (const auto& s : slices) t.push_back(s.t);
  return t;
}

namespace {

std::size_t locate(const std::vector<double>& xs, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t j = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  return std::min(j, xs.size() - 2);
}

}  // namespace

double interp_cubic(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 2) throw std::invalid_argument("interp_cubic: need matching samples");
  if (n < 4) {
    std::size_t j = locate(xs, x);
    double w = (x - xs[j]) / (xs[j + 1] - xs[j]);
    return (1.0 - w) * ys[j] + w * ys[j + 1];
  }
  std::size_t j = locate(xs, x);
  std::size_t s = j == 0 ? 0 : std::min(j - 1, n - 4);
  double out = 0.0;
  for (std::size_t a = s; a < s + 4; ++a) {
    double l = 1.0;
    for (std::size_t b = s; b < s + 4; ++b)
      if (b != a) l *= (x - xs[b]) / (xs[a] - xs[b]);
    out += l * ys[a];
  }
  return out;
}

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys) : x_(std::move(xs)), y_(std::move(ys)) {
  const std::size_t n = x_.size();
  if (n != y_.size() || n < 2) throw std::invalid_argument("MonotoneCubic: need matching samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("MonotoneCubic: abscissae must increase");
  d_.assign(n, 0.0);
  std::vector<double> h(n - 1), s(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    s[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    d_[0] = d_[1] = s[0];
    return;
  }
  // Three-point derivatives, then the Fritsch-Carlson limiter.
  for (std::size_t i = 1; i + 1 < n; ++i) d_[i] = (h[i] * s[i - 1] + h[i - 1] * s[i]) / (h[i - 1] + h[i]);
  d_[0] = ((2.0 * h[0] + h[1]) * s[0] - h[0] * s[1]) / (h[0] + h[1]);
  d_[n - 1] = ((2.0 * h[n - 2] + h[n - 3]) * s[n - 2] - h[n - 2] * s[n - 3]) / (h[n - 2] + h[n - 3]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (s[i] == 0.0) {
      d_[i] = d_[i + 1] = 0.0;
      continue;
    }
    double a = d_[i] / s[i], b = d_[i + 1] / s[i];
    if (a < 0.0) d_[i] = 0.0, a = 0.0;
    if (b < 0.0) d_[i + 1] = 0.0, b = 0.0;
    double q = a * a + b * b;
    if (q > 9.0) {
      double tau = 3.0 / std::sqrt(q);
      d_[i] = tau * a * s[i];
      d_[i + 1] = tau * b * s[i];
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  std::size_t j = locate(x_, x);
  double h = x_[j + 1] - x_[j];
  double w = (x - x_[j]) / h;
  double w2 = w * w, w3 = w2 * w;
  return (2 * w3 - 3 * w2 + 1) * y_[j] + (w3 - 2 * w2 + w) * h * d_[j] + (-2 * w3 + 3 * w2) * y_[j + 1] +
         (w3 - w2) * h * d_[j + 1];
}

Field resample_uniform(const std::vector<double>& xs, const std::vector<double>& ys, double t, double lo,
                       double hi, std::size_t N, bool monotone) {
  Field out;
  out.grid = {lo, hi, N};
  out.t = t;
  out.values.resize(N);
  if (monotone) {
    MonotoneCubic mc(xs, ys);
    for (std::size_t i = 0; i < N; ++i) out.values[i] = mc(out.grid.r(i));
  } else {
    for (std::size_t i = 0; i < N; ++i) out.values[i] = interp_cubic(xs, ys, out.grid.r(i));
  }
  return out;
}

}  // namespace plap
