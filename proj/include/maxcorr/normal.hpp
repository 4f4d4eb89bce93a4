#pragma once

// Standard normal distribution: density, cumulative, quantile, and the
// bivariate cumulative used to map asset correlation to default correlation.

namespace maxcorr {

double norm_pdf(double x);

// Phi(x) via erfc; accurate in both tails.
double norm_cdf(double x);

// Inverse of norm_cdf. Rational approximation polished with one Halley step
// against the erfc-based CDF; round-trip error |Phi(quantile(p)) - p| stays
// below 1e-12 across (0,1). Returns -inf/+inf at p = 0/1.
double norm_quantile(double p);

// P(X < h, Y < k) for standard bivariate normal with correlation rho.
// Single-integral reduction evaluated with adaptive Gauss-Legendre panels
// to 1e-10 absolute; |rho| = 1 uses the exact comonotone forms.
double binorm_cdf(double h, double k, double rho);

// The correlation correction Phi2(h,k,rho) - Phi(h)Phi(k), i.e. the
// single-integral term on its own. Throws NumericalError if the adaptive
// quadrature cannot reach tolerance.
double binorm_corr_integral(double h, double k, double rho);

} // namespace maxcorr
