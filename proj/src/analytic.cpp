#include "oal/analytic.hpp"

#include <cmath>

namespace oal {

namespace {

constexpr double zero_prob_floor = 1e-14;

} // namespace

Complex alpha_pm(double t, const SystemParams& p, Branch branch) {
    const double theta = reduce_phase(p.delta(), t);
    const double r = p.r();
    if (branch == Branch::plus)
        return -r * (1.0 - std::polar(1.0, -theta));
    return r * (1.0 - std::polar(1.0, theta));
}

double phase_no_ordering(double t, const SystemParams& p) {
    const double r = p.r();
    // Reduce the two products separately; each is exact to double-double.
    const double a = reduce_phase(p.omega12, t);
    const double b = reduce_phase(r * r * p.delta(), t);
    return fold_2pi(a + b);
}

double ordering_correction(double t, const SystemParams& p) {
    const double r = p.r();
    const double theta = reduce_phase(p.delta(), t);
    return r * r * (p.delta() * t - std::sin(theta));
}

double phase_exact(double t, const SystemParams& p) {
    const double r = p.r();
    const double a = reduce_phase(p.omega12, t);
    const double theta = reduce_phase(p.delta(), t);
    return fold_2pi(a + r * r * std::sin(theta));
}

Complex coherent_overlap(Complex a, Complex b) {
    return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

Complex overlap_q(double t, const SystemParams& p, Ordering ordering) {
    const double phi = (ordering == Ordering::with_ordering) ? phase_exact(t, p) : phase_no_ordering(t, p);
    const Complex ov = coherent_overlap(alpha_pm(t, p, Branch::plus), alpha_pm(t, p, Branch::minus));
    return ov * std::polar(1.0, 2.0 * phi);
}

double detection_probability(double t, const SystemParams& p, Branch branch, Ordering ordering) {
    const Complex q = overlap_q(t, p, ordering);
    const double s = (branch == Branch::plus) ? 1.0 : -1.0;
    // p_pm = (2 +- (q + q*)) / 4; clamp the rounding fuzz at the edges.
    const double prob = (2.0 + s * 2.0 * q.real()) / 4.0;
    return std::min(1.0, std::max(0.0, prob));
}

CatState conditional_state(double t, const SystemParams& p, Branch branch, Ordering ordering) {
    CatState cat;
    cat.alpha_plus = alpha_pm(t, p, Branch::plus);
    cat.alpha_minus = alpha_pm(t, p, Branch::minus);
    cat.phi = (ordering == Ordering::with_ordering) ? phase_exact(t, p) : phase_no_ordering(t, p);
    cat.branch = branch;
    cat.ordering = ordering;
    cat.prob = detection_probability(t, p, branch, ordering);
    if (cat.prob < zero_prob_floor)
        throw ZeroProbabilityError("conditional_state: branch probability " + std::to_string(cat.prob) +
                                   " is numerically zero at t = " + std::to_string(t));
    cat.norm = 1.0 / std::sqrt(2.0 * cat.prob);
    return cat;
}

FockVector cat_to_fock(const CatState& cat, int dim) {
    const Complex ephi_m = std::polar(1.0, -cat.phi);
    const Complex ephi_p = std::polar(1.0, +cat.phi);
    const double s = (cat.branch == Branch::plus) ? 1.0 : -1.0;
    const Complex c = cat.norm / std::sqrt(2.0);
    FockVector v = coherent_superposition(c * ephi_m, cat.alpha_plus, s * c * ephi_p, cat.alpha_minus, dim);
    const int k = std::min(5, dim - 1);
    if (k >= 1 && truncation_tail(v, k) > 1e-10)
        throw ConvergenceError("cat_to_fock: truncation tail above 1e-10 at dim " + std::to_string(dim) +
                               "; the sizing rule suggests " +
                               std::to_string(coherent_dim_for(std::abs(cat.alpha_plus))));
    return v.normalized();
}

double total_noise_closed_form(const CatState& cat) {
    const double d2 = std::norm(cat.alpha_plus - cat.alpha_minus);
    const Complex q = coherent_overlap(cat.alpha_plus, cat.alpha_minus) * std::polar(1.0, 2.0 * cat.phi);
    const double s = (cat.branch == Branch::plus) ? 1.0 : -1.0;
    const double denom = 2.0 + s * 2.0 * q.real();
    if (denom < 2.0 * zero_prob_floor)
        throw ZeroProbabilityError("total_noise_closed_form: branch probability is numerically zero");
    return d2 * (1.0 - std::exp(-d2)) / (denom * denom);
}

} // namespace oal
