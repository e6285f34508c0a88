#pragma once

namespace gvp {

// Standard normal kernels. The cdf is erfc-based; the log-cdf switches to an
// asymptotic expansion once erfc would underflow, so censored scores and
// mixture weights stay finite arbitrarily deep in the tails.

double norm_pdf(double z);
double norm_log_pdf(double z);
double norm_cdf(double z);

// log Phi(z); finite for every finite z.
double norm_log_cdf(double z);

// Inverse cdf on (0, 1). Throws std::invalid_argument outside the open
// interval. Accurate to ~1 ulp over the full range (rational approximation
// with tail branches).
double norm_quantile(double p);

// phi(z) / Phi(z), evaluated in log space so the lower tail does not 0/0.
double norm_hazard_lower(double z);

}  // namespace gvp
