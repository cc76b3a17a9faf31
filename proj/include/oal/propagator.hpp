#pragma once

#include <vector>

#include <Eigen/Dense>

#include "oal/analytic.hpp"
#include "oal/fock.hpp"
#include "oal/params.hpp"

namespace oal {

/// Which atomic levels the joint state carries.  `two_level` keeps only the
/// ground-state doublet |+>, |-> (the excited level adiabatically
/// eliminated); `three_level` adds the excited state |3>.
enum class AtomBasis { two_level, three_level };

/// Joint atom+field state: one truncated Fock vector per atomic level, in the
/// order |+>, |->[, |3>].  The global norm is the sum over branches.
struct AtomFieldState {
    AtomBasis basis = AtomBasis::two_level;
    std::vector<Eigen::VectorXcd> branches;

    int branch_count() const { return static_cast<int>(branches.size()); }
    int dim() const { return branches.empty() ? 0 : static_cast<int>(branches[0].size()); }
    double norm_sq() const;

    /// |+> (x) |vac>, or ground-superposition (w_plus|+> + w_minus|->) (x) |vac>.
    static AtomFieldState plus_vacuum(int dim, AtomBasis basis = AtomBasis::two_level);
    static AtomFieldState ground_superposition(Complex w_plus, Complex w_minus, int dim,
                                               AtomBasis basis = AtomBasis::two_level);
    /// Bare ground state |1> = (|+> + |->)/sqrt(2) with the cavity in vacuum.
    static AtomFieldState bare_ground_vacuum(int dim, AtomBasis basis = AtomBasis::three_level);
};

/// |<u|v>|^2 summed over branches; in [0, 1] for normalized states.
double fidelity(const AtomFieldState& u, const AtomFieldState& v);

/// Time-stepping strategy for the midpoint-sampled exponential integrator.
/// Both evaluate exactly the same per-step unitary exp(-i H(t_mid) dt):
/// `midpoint_eig` diagonalizes H(t_mid) each step (reference), while
/// `frame_factored` peels off the known rotating frame analytically and
/// reuses one precomputed eigendecomposition (fast path).
enum class Stepper { frame_factored, midpoint_eig };

struct PropagateOptions {
    long steps = 0;                    ///< 0 = per-Hamiltonian default
    std::vector<double> sample_times;  ///< empty = uniform grid incl. endpoints
    Stepper stepper = Stepper::frame_factored;
    double tail_tol = 1e-8;            ///< truncation-pressure guard per sample
    bool compare_analytic = false;     ///< record fidelity vs closed-form state
};

/// Observables recorded while propagating.
struct PropagationSample {
    double t = 0.0;
    double norm = 0.0;                     ///< global norm (should stay 1)
    double excited_population = 0.0;       ///< weight on |3> (0 for two_level)
    std::vector<double> branch_photons;    ///< sum_n n |c_n|^2 per branch
    double fidelity_vs_analytic = -1.0;    ///< -1 when not requested
};

struct PropagationResult {
    AtomFieldState final_state;
    std::vector<PropagationSample> samples;
    long step_count = 0;
    double max_norm_drift = 0.0; ///< max |norm - 1| over samples
};

/// Propagate under the full time-independent coupling Hamiltonian (ground
/// doublet splitting + cavity/drive couplings to the excited level) by exact
/// one-shot diagonalization.  Requires a three_level state.
PropagationResult propagate_HI(const AtomFieldState& initial, double t, const SystemParams& p,
                               const PropagateOptions& opts = {});

/// Propagate in the frame rotating with the ground-state splitting, where the
/// couplings acquire e^{-+ i omega12 t} factors; midpoint-exponential steps.
/// Requires a three_level state.
PropagationResult propagate_HJ(const AtomFieldState& initial, double t, const SystemParams& p,
                               const PropagateOptions& opts = {});

/// Propagate under the effective two-level Hamiltonian that survives
/// adiabatic elimination: branch-diagonal displacement generators
/// r delta (a e^{-+ i delta t} + a+ e^{+- i delta t}).  Requires two_level.
PropagationResult propagate_HK(const AtomFieldState& initial, double t, const SystemParams& p,
                               const PropagateOptions& opts = {});

/// Closed-form evolution operator of the effective two-level model: per
/// branch a displacement D(alpha'_pm(t)) and, with ordering, the phase
/// e^{+- i ordering_correction(t)}.  This is what propagate_HK must converge
/// to as steps grow.
AtomFieldState magnus_UK(double t, const SystemParams& p, const AtomFieldState& state,
                         Ordering ordering = Ordering::with_ordering);

/// Full closed-form solution in the original (non-rotating) picture: the
/// effective-model evolution dressed back with the frame unitaries.  The
/// cavity branch amplitudes are alpha_pm(t) and the branch phases e^{-+i phi}.
AtomFieldState analytic_UI(double t, const SystemParams& p, const AtomFieldState& state,
                           Ordering ordering = Ordering::with_ordering);

/// Diagonal frame unitaries connecting the pictures:
///   psi_J(t) = U1^dag(t) psi_I(t),   psi_K(t) = U2^dag(t) psi_J(t).
/// U1 carries the ground-doublet splitting phases e^{-+ i omega12 t}; U2 the
/// branch-signed mode rotation e^{-+ i (delta n + r^2 delta) t}.
AtomFieldState apply_frame_U1(double t, const SystemParams& p, const AtomFieldState& state,
                              bool inverse = false);
AtomFieldState apply_frame_U2(double t, const SystemParams& p, const AtomFieldState& state,
                              bool inverse = false);

/// Spectral norm of the doubly nested commutator
/// [H_K(t1), [H_K(t2), H_K(t3)]] per branch, restricted to the interior of
/// the truncated basis (top `boundary_rows` rows/columns excluded, default 2).
/// Vanishes identically in the untruncated space, so the interior block must
/// be numerically zero; the excluded edge rows carry pure truncation
/// artifacts.  Returns the max over the two branches.
double nested_commutator_norm(double t1, double t2, double t3, const SystemParams& p, int dim,
                              int boundary_rows = 2);

/// Dense Hamiltonian builders used by the reference stepper and by tests.
Eigen::MatrixXcd hamiltonian_HI(const SystemParams& p, int dim);
Eigen::MatrixXcd hamiltonian_HJ(double t, const SystemParams& p, int dim);
Eigen::MatrixXcd hamiltonian_HK(double t, const SystemParams& p, int dim);

} // namespace oal
