#pragma once

namespace gex {

// Psi(u) = P(N > u).
double normal_tail(double u);

// log Psi(u); finite far beyond the underflow point of normal_tail.
double log_normal_tail(double u);

// Standard normal cdf and density.
double normal_cdf(double x);
double normal_pdf(double x);

}  // namespace gex
