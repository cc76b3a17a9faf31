#pragma once

#include <complex>

#include "oal/fock.hpp"
#include "oal/params.hpp"

namespace oal {

/// Outcome of measuring the atomic ground-state superposition: |+> or |->.
enum class Branch { plus, minus };

/// Whether phases carry the time-ordering correction of the evolution
/// operator or use the naive (un-ordered) exponent.
enum class Ordering { with_ordering, without_ordering };

/// Coherent amplitude grown in the cavity along the given atomic branch:
///   alpha_+(t) = -r (1 - e^{-i delta t}),   alpha_-(t) = +r (1 - e^{+i delta t}).
/// Periodic circles in phase space with period t0.
Complex alpha_pm(double t, const SystemParams& p, Branch branch);

/// Accumulated phase without the time-ordering correction:
/// (omega12 + r^2 delta) t, reduced to [0, 2pi).
double phase_no_ordering(double t, const SystemParams& p);

/// Phase deficit produced by time-ordering, r^2 (delta t - sin delta t).
/// Unreduced: non-negative and non-decreasing in t.
double ordering_correction(double t, const SystemParams& p);

/// Exact accumulated phase omega12 t + r^2 sin(delta t) =
/// phase_no_ordering - ordering_correction, reduced to [0, 2pi).
double phase_exact(double t, const SystemParams& p);

/// <a|b> for coherent amplitudes a, b: exp(-|a|^2/2 - |b|^2/2 + conj(a) b).
Complex coherent_overlap(Complex a, Complex b);

/// Branch interference term q(t) = <alpha_+|alpha_-> e^{2 i phi(t)} with phi
/// chosen per `ordering`.  |q| <= 1.
Complex overlap_q(double t, const SystemParams& p, Ordering ordering);

/// Conditional cavity state after detecting the atom in |+> or |->:
///   |psi_pm> = N_pm/sqrt(2) (e^{-i phi}|alpha_+> +- e^{+i phi}|alpha_->).
struct CatState {
    Complex alpha_plus;
    Complex alpha_minus;
    double phi;        ///< accumulated phase entering as e^{+-i phi}
    Branch branch;
    Ordering ordering;
    double norm;       ///< N_pm = 1/sqrt(2 p_pm)
    double prob;       ///< detection probability p_pm = (2 +- (q + q*))/4
};

/// Probability of finding the atom in the given ground-state branch.
double detection_probability(double t, const SystemParams& p, Branch branch, Ordering ordering);

/// Build the conditional cavity state at time t.  Throws ZeroProbabilityError
/// if the requested branch has numerically vanishing probability (e.g. the
/// minus branch at t = 0).
CatState conditional_state(double t, const SystemParams& p, Branch branch, Ordering ordering);

/// Expand a conditional state on the truncated number basis.  The expansion
/// is renormalized only after checking that the truncation tail is below
/// 1e-10; otherwise a ConvergenceError asks for a larger dimension.
FockVector cat_to_fock(const CatState& cat, int dim);

/// Total noise T = <a+a> - |<a>|^2 of the conditional state, evaluated in
/// closed form from the two amplitudes and q:
///   T = |alpha_+ - alpha_-|^2 (1 - e^{-|alpha_+ - alpha_-|^2}) / (2 +- (q + q*))^2.
double total_noise_closed_form(const CatState& cat);

} // namespace oal
