#include "oal/measures.hpp"

#include <cmath>

#include "oal/errors.hpp"

namespace oal {

namespace {

void require_normalized(const FockVector& v, const char* what) {
    if (!v.is_normalized())
        throw NormalizationError(std::string(what) + ": state norm^2 = " + std::to_string(v.norm_sq()) +
                                 " is not 1");
}

} // namespace

double mean_photon_number(const FockVector& state) {
    require_normalized(state, "mean_photon_number");
    double n_mean = 0.0;
    for (int n = 1; n < state.dim(); ++n)
        n_mean += n * std::norm(state[n]);
    return n_mean;
}

double total_noise(const FockVector& state) {
    require_normalized(state, "total_noise");
    double n_mean = 0.0;
    Complex a_mean = 0.0;
    for (int n = 1; n < state.dim(); ++n) {
        n_mean += n * std::norm(state[n]);
        a_mean += std::conj(state[n - 1]) * std::sqrt(static_cast<double>(n)) * state[n];
    }
    return n_mean - std::norm(a_mean);
}

double average_parity(const FockVector& state) { return parity_expectation(state); }

double relative_total_noise(const FockVector& state) {
    require_normalized(state, "relative_total_noise");
    // A = e^{i pi n} a has A+A = a+a, so only the first moment changes:
    // <A> = sum_n (-1)^n conj(c_n) sqrt(n+1) c_{n+1}.
    double n_mean = 0.0;
    Complex a_mod_mean = 0.0;
    for (int n = 1; n < state.dim(); ++n) {
        n_mean += n * std::norm(state[n]);
        const double sign = ((n - 1) % 2 == 0) ? 1.0 : -1.0;
        a_mod_mean += sign * std::conj(state[n - 1]) * std::sqrt(static_cast<double>(n)) * state[n];
    }
    return n_mean - std::norm(a_mod_mean);
}

double wigner_point(const FockVector& state, Complex alpha) {
    const FockVector displaced = apply_displacement(-alpha, state);

    // In the untruncated space the displacement is unitary; a norm deficit or
    // weight at the top of the basis means the point is unreliable.
    const double norm_sq = displaced.norm_sq();
    if (std::abs(norm_sq - 1.0) > 1e-8)
        throw ConvergenceError("wigner_point: displaced state lost norm " + detail::num_str(1.0 - norm_sq) +
                               "; increase dim for |alpha| = " + detail::num_str(std::abs(alpha)));
    const int k = std::min(4, state.dim() - 1);
    if (k >= 1 && truncation_tail(displaced, k) > 1e-8)
        throw ConvergenceError("wigner_point: displaced state presses on the truncation edge; increase dim");

    double parity = 0.0;
    for (int n = 0; n < displaced.dim(); ++n)
        parity += (n % 2 == 0 ? 1.0 : -1.0) * std::norm(displaced[n]);
    return 2.0 * parity;
}

WignerGrid wigner_grid(const FockVector& state, double re_min, double re_max, double im_min, double im_max,
                       int nx, int ny, Execution exec) {
    if (nx < 1 || ny < 1)
        throw InvalidDimensionError("wigner_grid: nx and ny must be >= 1");
    if (!(re_max >= re_min) || !(im_max >= im_min))
        throw ConfigError("wigner_grid: empty phase-space window");

    WignerGrid grid;
    grid.re_min = re_min;
    grid.re_max = re_max;
    grid.im_min = im_min;
    grid.im_max = im_max;
    grid.nx = nx;
    grid.ny = ny;
    grid.values.assign(static_cast<size_t>(nx) * ny, 0.0);

    // Each point is independent, so the parallel kernel is bit-identical to
    // the serial loop.  Errors are collected and rethrown after the loop
    // (throwing across an OpenMP region is undefined).
    std::string error;

    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int iy = 0; iy < ny; ++iy) {
            for (int ix = 0; ix < nx; ++ix) {
                try {
                    const Complex alpha(grid.re_at(ix), grid.im_at(iy));
                    grid.values[static_cast<size_t>(iy) * nx + ix] = wigner_point(state, alpha);
                } catch (const std::exception& e) {
#pragma omp critical
                    if (error.empty())
                        error = e.what();
                }
            }
        }
    } else {
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                const Complex alpha(grid.re_at(ix), grid.im_at(iy));
                grid.values[static_cast<size_t>(iy) * nx + ix] = wigner_point(state, alpha);
            }
    }

    if (!error.empty())
        throw ConvergenceError(error);
    return grid;
}

} // namespace oal
