#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace qnd {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

struct MinimumPoint {
  double x = 0.0;
  double fx = 0.0;
};

// Golden-section minimization of a unimodal f on [a, b] to absolute tolerance tol in x.
MinimumPoint golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                     double tol);

std::vector<double> linspace(double start, double stop, std::size_t n);
std::vector<double> logspace(double start, double stop, std::size_t n);

}  // namespace qnd
