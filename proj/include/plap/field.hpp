#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace plap {

struct Grid {
  double r_min = 0.0;
  double r_max = 1.0;
  std::size_t N = 101;

  double dr() const { return (r_max - r_min) / static_cast<double>(N - 1); }
  double r(std::size_t i) const { return i + 1 == N ? r_max : r_min + dr() * static_cast<double>(i); }
  std::vector<double> nodes() const;
};

struct Field {
  Grid grid;
  double t = 0.0;
  std::vector<double> values;
};

struct Trajectory {
  Grid grid;
  std::vector<Field> slices;

  std::vector<double> times() const;
};

struct FoldError : std::runtime_error {
  double location;
  FoldError(const std::string& what, double where) : std::runtime_error(what), location(where) {}
};

// Piecewise cubic through the four nearest nodes (nodes strictly increasing).
double interp_cubic(const std::vector<double>& xs, const std::vector<double>& ys, double x);

// Monotone piecewise cubic Hermite (Fritsch-Carlson limited).
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> xs, std::vector<double> ys);
  double operator()(double x) const;

 private:
  std::vector<double> x_, y_, d_;
};

// Samples of a field on an arbitrary increasing abscissa, re-gridded uniformly over [lo, hi].
Field resample_uniform(const std::vector<double>& xs, const std::vector<double>& ys, double t, double lo,
                       double hi, std::size_t N, bool monotone);

}  // namespace plap
