#include "itc/rng.hpp"

#include <cmath>

namespace itc {

double Rng::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    // Box-Muller; u1 shifted away from zero so log stays finite.
    double u1 = uniform();
    double u2 = uniform();
    u1 = u1 <= 0.0 ? 0x1.0p-53 : u1;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
}

} // namespace itc
