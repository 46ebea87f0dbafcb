#include "slda/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace slda {

double digamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("digamma: argument must be positive");
  }
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  // Psi(x) ~ ln x - 1/(2x) - sum_n B_{2n} / (2n x^{2n})
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = inv2 * (1.0 / 12.0 -
                  inv2 * (1.0 / 120.0 -
                  inv2 * (1.0 / 252.0 -
                  inv2 * (1.0 / 240.0 -
                  inv2 * (1.0 / 132.0 -
                  inv2 * (691.0 / 32760.0))))));
  return result + std::log(x) - 0.5 * inv - series;
}

double exp_digamma(double x) { return std::exp(digamma(x)); }

double rising_factorial(double x, int n) {
  double p = 1.0;
  for (int j = 0; j < n; ++j) p *= x + j;
  return p;
}

}  // namespace slda
