// Digamma and friends. The sampling distribution exponentiates digamma
// differences, so accuracy near zero matters more than usual.
#pragma once

namespace slda {

// Psi(x) for x > 0: upward recurrence to x >= 10, then the asymptotic
// Bernoulli series. Absolute error below 1e-12 on [1e-3, 1e6].
double digamma(double x);

// exp(Psi(x)). Approaches x - 1/2 for large x; drops super-exponentially
// near zero.
double exp_digamma(double x);

// Rising factorial x(x+1)...(x+n-1), i.e. Gamma(x+n)/Gamma(x) for integer n.
double rising_factorial(double x, int n);

}  // namespace slda
