#pragma once

#include <vector>

#include "oal/fock.hpp"

namespace oal {

/// Kernel execution policy.  `parallel` uses OpenMP; `serial` is the plain
/// reference loop the parallel kernels are tested against.  Both produce
/// bit-identical results because every grid point is computed independently.
enum class Execution { serial, parallel };

/// <a+a> of a normalized state.
double mean_photon_number(const FockVector& state);

/// Total noise T = <a+a> - |<a>|^2.  Zero exactly on coherent states, which
/// makes it a coherence-relative (rather than vacuum-relative) noise measure.
double total_noise(const FockVector& state);

/// Number-parity expectation <(-1)^n> in [-1, 1].
double average_parity(const FockVector& state);

/// Total noise measured relative to the modified annihilation operator
/// A = e^{i pi n} a:  T_A = <A+A> - |<A>|^2 = <a+a> - |<A>|^2.  Vanishes on
/// eigenstates of A (equal-weight superpositions of |a> and |-a> with the
/// right relative phase), flagging them as generalized-coherent.
double relative_total_noise(const FockVector& state);

/// Wigner function at phase-space point alpha via the displaced-parity form
/// W(alpha) = 2 <D(-alpha) psi|(-1)^n|D(-alpha) psi>, normalized so the
/// vacuum peaks at W(0) = 2.  Throws ConvergenceError when the displaced
/// state presses against the truncation edge (grow `dim`).
double wigner_point(const FockVector& state, Complex alpha);

/// Rectangular phase-space raster of the Wigner function.
struct WignerGrid {
    double re_min, re_max;
    double im_min, im_max;
    int nx = 0, ny = 0;
    std::vector<double> values; ///< row-major: values[iy * nx + ix]

    double re_at(int ix) const { return nx > 1 ? re_min + (re_max - re_min) * ix / (nx - 1) : re_min; }
    double im_at(int iy) const { return ny > 1 ? im_min + (im_max - im_min) * iy / (ny - 1) : im_min; }
    double at(int ix, int iy) const { return values[static_cast<size_t>(iy) * nx + ix]; }
};

/// Evaluate the Wigner function on a grid.  The parallel kernel distributes
/// points across OpenMP threads; results are identical to the serial loop.
WignerGrid wigner_grid(const FockVector& state, double re_min, double re_max, double im_min, double im_max,
                       int nx, int ny, Execution exec = Execution::parallel);

} // namespace oal
