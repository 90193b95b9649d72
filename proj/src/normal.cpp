#include "rieszlab/normal.hpp"

#include <boost/math/distributions/normal.hpp>

#include "rieszlab/errors.hpp"

namespace rieszlab {

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidAlpha("normal quantile needs p in (0, 1)");
    static const boost::math::normal_distribution<double> standard(0.0, 1.0);
    return boost::math::quantile(standard, p);
}

double normal_cdf(double x) {
    static const boost::math::normal_distribution<double> standard(0.0, 1.0);
    return boost::math::cdf(standard, x);
}

}  // namespace rieszlab
