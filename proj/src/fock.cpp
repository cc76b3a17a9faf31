#include "oal/fock.hpp"

#include <cmath>

namespace oal {

namespace {

void require_dim(int dim) {
    if (dim < 1)
        throw InvalidDimensionError("Fock dimension must be >= 1, got " + std::to_string(dim));
}

void require_same_dim(int a, int b, const char* what) {
    if (a != b)
        throw DimensionMismatchError(std::string(what) + ": dimensions " + std::to_string(a) + " vs " +
                                     std::to_string(b));
}

void require_normalized(const FockVector& v, const char* what) {
    if (!v.is_normalized())
        throw NormalizationError(std::string(what) + ": state norm^2 = " + std::to_string(v.norm_sq()) +
                                 " is not 1");
}

} // namespace

FockVector FockVector::vacuum(int dim) {
    require_dim(dim);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
    c[0] = 1.0;
    return FockVector(std::move(c));
}

FockVector FockVector::normalized() const {
    const double n = std::sqrt(norm_sq());
    if (n <= 0.0)
        throw NormalizationError("FockVector::normalized: zero vector");
    return FockVector(coeffs_ / n);
}

int coherent_dim_for(double amplitude) {
    const double a = std::abs(amplitude);
    return static_cast<int>(std::ceil(a * a + 10.0 * a + 20.0));
}

FockVector coherent_fock_vector(Complex alpha, int dim) {
    require_dim(dim);
    Eigen::VectorXcd c(dim);
    // c_n = e^{-|a|^2/2} a^n / sqrt(n!), by upward recurrence.
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n)
        c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    return FockVector(std::move(c));
}

FockVector coherent_superposition(Complex c_a, Complex alpha, Complex c_b, Complex beta, int dim) {
    const FockVector va = coherent_fock_vector(alpha, dim);
    const FockVector vb = coherent_fock_vector(beta, dim);
    return FockVector(c_a * va.coeffs() + c_b * vb.coeffs());
}

namespace {

// Shared builder for the normalized two-component superpositions: prefactor
// is the exact infinite-dimensional normalization; a final renormalization
// absorbs the (checked) truncation loss.
FockVector checked_two_component(Complex c_a, Complex alpha, Complex c_b, Complex beta, int dim) {
    FockVector v = coherent_superposition(c_a, alpha, c_b, beta, dim);
    const int k = std::min(5, dim - 1);
    if (k >= 1 && truncation_tail(v, k) > 1e-10)
        throw ConvergenceError("coherent superposition: truncation tail above 1e-10, increase dim (have " +
                               std::to_string(dim) + ", need about " + std::to_string(coherent_dim_for(std::abs(alpha))) +
                               ")");
    return v.normalized();
}

} // namespace

FockVector even_coherent(Complex alpha, int dim) {
    const double norm = std::sqrt(2.0 * (1.0 + std::exp(-2.0 * std::norm(alpha))));
    return checked_two_component(1.0 / norm, alpha, 1.0 / norm, -alpha, dim);
}

FockVector odd_coherent(Complex alpha, int dim) {
    const double w = 2.0 * (1.0 - std::exp(-2.0 * std::norm(alpha)));
    if (w <= 0.0)
        throw ZeroProbabilityError("odd_coherent: amplitude 0 has no odd component");
    const double norm = std::sqrt(w);
    return checked_two_component(1.0 / norm, alpha, -1.0 / norm, -alpha, dim);
}

FockVector yurke_stoler(Complex alpha, int dim) {
    const double norm = std::sqrt(2.0);
    return checked_two_component(1.0 / norm, alpha, Complex(0.0, 1.0) / norm, -alpha, dim);
}

ModeOperator annihilation_matrix(int dim) {
    require_dim(dim);
    ModeOperator a = ModeOperator::Zero(dim, dim);
    for (int n = 1; n < dim; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

ModeOperator creation_matrix(int dim) { return annihilation_matrix(dim).adjoint(); }

ModeOperator number_matrix(int dim) {
    require_dim(dim);
    ModeOperator n = ModeOperator::Zero(dim, dim);
    for (int k = 0; k < dim; ++k)
        n(k, k) = static_cast<double>(k);
    return n;
}

ModeOperator parity_matrix(int dim) {
    require_dim(dim);
    ModeOperator p = ModeOperator::Zero(dim, dim);
    for (int k = 0; k < dim; ++k)
        p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return p;
}

ModeOperator modified_annihilation_matrix(int dim) { return parity_matrix(dim) * annihilation_matrix(dim); }

ModeOperator displacement_matrix(Complex beta, int dim) {
    require_dim(dim);
    // D(beta) = exp(beta a+ - beta* a) = exp(-i H) with hermitian
    // H = i (beta a+ - beta* a); exponentiate through the spectral form so the
    // result is unitary to rounding.
    const ModeOperator a = annihilation_matrix(dim);
    const Complex i(0.0, 1.0);
    ModeOperator h = i * (beta * a.adjoint() - std::conj(beta) * a);
    Eigen::SelfAdjointEigenSolver<ModeOperator> es(h);
    const Eigen::VectorXd& lam = es.eigenvalues();
    Eigen::VectorXcd phase(dim);
    for (int k = 0; k < dim; ++k)
        phase[k] = std::polar(1.0, -lam[k]);
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

Complex inner_product(const FockVector& u, const FockVector& v) {
    require_same_dim(u.dim(), v.dim(), "inner_product");
    return u.coeffs().dot(v.coeffs()); // Eigen's dot conjugates the left factor
}

double parity_expectation(const FockVector& state) {
    require_normalized(state, "parity_expectation");
    double p = 0.0;
    for (int n = 0; n < state.dim(); ++n)
        p += (n % 2 == 0 ? 1.0 : -1.0) * std::norm(state[n]);
    return p;
}

double truncation_tail(const FockVector& state, int k) {
    if (k < 1 || k >= state.dim())
        throw InvalidDimensionError("truncation_tail: need 1 <= k < dim");
    double tail = 0.0;
    for (int n = state.dim() - k; n < state.dim(); ++n)
        tail += std::norm(state[n]);
    return tail;
}

FockVector apply_displacement(Complex beta, const FockVector& state) {
    const int dim = state.dim();
    if (beta == Complex(0.0, 0.0))
        return state;

    // Collinear split D(beta) = D(beta/m)^m; parallel steps compose without a
    // phase because Im(b1 conj(b2)) = 0.  Keeping each step at amplitude <= 1
    // bounds the intermediate growth of the normal-ordered series at e^{1/2};
    // a single large step amplifies roundoff by e^{|beta|^2/2} and visibly
    // eats norm from amplitude ~5 upward.
    const int m = std::max(1, static_cast<int>(std::ceil(std::abs(beta))));
    const Complex step = beta / static_cast<double>(m);
    const double gauss = std::exp(-0.5 * std::norm(step));

    Eigen::VectorXcd cur = state.coeffs();
    for (int s = 0; s < m; ++s) {
        // exp(-|b|^2/2) exp(b a+) exp(-b* a); both series terminate after at
        // most `dim` applications because a and a+ are nilpotent here.
        Eigen::VectorXcd acc = cur;
        Eigen::VectorXcd term = cur;
        const Complex mb = -std::conj(step);
        for (int k = 1; k < dim; ++k) {
            Eigen::VectorXcd lowered(dim);
            for (int n = 0; n < dim - 1; ++n)
                lowered[n] = std::sqrt(static_cast<double>(n + 1)) * term[n + 1];
            lowered[dim - 1] = 0.0;
            term = (mb / static_cast<double>(k)) * lowered;
            acc += term;
            if (term.squaredNorm() < 1e-36 * acc.squaredNorm())
                break;
        }

        Eigen::VectorXcd out = acc;
        term = acc;
        for (int k = 1; k < dim; ++k) {
            Eigen::VectorXcd raised(dim);
            raised[0] = 0.0;
            for (int n = 1; n < dim; ++n)
                raised[n] = std::sqrt(static_cast<double>(n)) * term[n - 1];
            term = (step / static_cast<double>(k)) * raised;
            out += term;
            if (term.squaredNorm() < 1e-36 * out.squaredNorm())
                break;
        }

        cur = gauss * out;
    }
    return FockVector(std::move(cur));
}

FockVector apply_matrix(const ModeOperator& m, const FockVector& state) {
    require_same_dim(static_cast<int>(m.cols()), state.dim(), "apply_matrix");
    return FockVector(m * state.coeffs());
}

} // namespace oal
