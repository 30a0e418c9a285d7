#include "qndsqueeze/numeric.hpp"

#include "qndsqueeze/errors.hpp"

namespace qnd {

MinimumPoint golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                                     double tol) {
  if (!(b > a) || !(tol > 0.0)) throw DomainError("golden section needs a < b and tol > 0");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

std::vector<double> linspace(double start, double stop, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = start;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 0) out.back() = stop;
  return out;
}

std::vector<double> logspace(double start, double stop, std::size_t n) {
  if (!(start > 0.0) || !(stop > 0.0)) throw DomainError("log grid needs positive endpoints");
  std::vector<double> out = linspace(std::log(start), std::log(stop), n);
  for (double& v : out) v = std::exp(v);
  if (n > 0) {
    out.front() = start;
    out.back() = stop;
  }
  return out;
}

}  // namespace qnd
