#pragma once

namespace ruinopt::normal {

/// Standard normal CDF.
double cdf(double z);

/// Standard normal upper tail, 1 - cdf(z), without cancellation.
double sf(double z);

/// Standard normal quantile (Wichura AS241, ~1e-16 relative accuracy).
/// Returns -inf at 0 and +inf at 1.
double quantile(double p);

} // namespace ruinopt::normal
