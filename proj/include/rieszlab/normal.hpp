#ifndef RIESZLAB_NORMAL_HPP
#define RIESZLAB_NORMAL_HPP

namespace rieszlab {

// Standard normal quantile Phi^{-1}(p) for p in (0, 1).
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace rieszlab

#endif
