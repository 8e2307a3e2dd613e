#pragma once

namespace ltah {

// Standard normal CDF.
double normal_cdf(double z);

// Inverse standard normal CDF for p in (0, 1), Wichura's AS241 (PPND16),
// relative accuracy about 1e-16.
double normal_quantile(double p);

// z_{1-alpha/2}; Error(InvalidInput) unless alpha is in (0, 1).
double two_sided_critical(double alpha);

// 2 * (1 - Phi(|z|)), evaluated through the upper tail to keep precision.
double two_sided_p(double z);

}  // namespace ltah
