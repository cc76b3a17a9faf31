#include "oal/params.hpp"

#include <cmath>

namespace oal {

namespace {

// Double-double helpers: an exact product / sum split into hi + lo parts.
struct DD {
    double hi;
    double lo;
};

DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

// 2*pi to ~107 bits.
constexpr double two_pi_hi = 6.283185307179586;      // nearest double to 2*pi
constexpr double two_pi_lo = 2.4492935982947064e-16; // 2*pi - two_pi_hi

} // namespace

double fold_2pi(double angle) {
    double a = std::remainder(angle, two_pi_hi);
    if (a < 0.0)
        a += two_pi_hi;
    if (a >= two_pi_hi)
        a -= two_pi_hi;
    return a;
}

double reduce_phase(double omega, double t) {
    const DD x = two_prod(omega, t);
    if (!std::isfinite(x.hi))
        throw ConfigError("reduce_phase: non-finite phase omega * t");

    // Subtract the nearest multiple of 2*pi with both limbs of the product
    // and of 2*pi kept, so cancellation does not eat the reduced phase.
    const double n = std::nearbyint(x.hi / two_pi_hi);
    const DD p1 = two_prod(n, two_pi_hi);
    const DD p2 = two_prod(n, two_pi_lo);
    const DD d = two_sum(x.hi, -p1.hi);
    const double rem = d.hi + (d.lo + x.lo - p1.lo - p2.hi - p2.lo);
    return fold_2pi(rem);
}

} // namespace oal
