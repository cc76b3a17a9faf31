#pragma once

#include <complex>

#include <Eigen/Dense>

#include "oal/errors.hpp"

namespace oal {

using Complex = std::complex<double>;

/// Dense operator on the truncated number basis {|0>, ..., |dim-1>}.
using ModeOperator = Eigen::MatrixXcd;

/// State of a single bosonic mode in the truncated number basis.  Immutable
/// after construction; all operations return fresh vectors, so instances can
/// be shared freely across threads.
class FockVector {
  public:
    explicit FockVector(Eigen::VectorXcd coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.size() < 1)
            throw InvalidDimensionError("FockVector: dimension must be >= 1");
    }

    static FockVector vacuum(int dim);

    int dim() const { return static_cast<int>(coeffs_.size()); }
    const Eigen::VectorXcd& coeffs() const { return coeffs_; }
    Complex operator[](int n) const { return coeffs_[n]; }

    double norm_sq() const { return coeffs_.squaredNorm(); }
    bool is_normalized(double tol = 1e-10) const { return std::abs(norm_sq() - 1.0) <= tol; }
    FockVector normalized() const;

  private:
    Eigen::VectorXcd coeffs_;
};

/// Basis size that keeps the truncation tail of a coherent state of the given
/// amplitude negligible: ceil(|a|^2 + 10|a| + 20).
int coherent_dim_for(double amplitude);

/// Coherent state |alpha> truncated to `dim` levels.  Coefficients are the
/// exact untruncated ones; the vector is NOT renormalized, so its norm
/// deficit equals the weight lost to truncation.
FockVector coherent_fock_vector(Complex alpha, int dim);

/// c_a |alpha> + c_b |beta>, truncated; unnormalized.
FockVector coherent_superposition(Complex c_a, Complex alpha, Complex c_b, Complex beta, int dim);

/// Normalized even / odd superpositions (|a> +- |-a>) and the equal-weight
/// superposition with a 90-degree relative phase, (|a> + i|-a>)/sqrt(2).
FockVector even_coherent(Complex alpha, int dim);
FockVector odd_coherent(Complex alpha, int dim);
FockVector yurke_stoler(Complex alpha, int dim);

ModeOperator annihilation_matrix(int dim);
ModeOperator creation_matrix(int dim);
ModeOperator number_matrix(int dim);
ModeOperator parity_matrix(int dim);

/// exp(i pi n) a — the annihilation operator preceded by a number-parity
/// twist.  Equal-weight superpositions of |a> and |-a> are eigenstates of it
/// for a suitable relative phase, which is what the relative-total-noise
/// measure probes.
ModeOperator modified_annihilation_matrix(int dim);

/// Exactly unitary displacement operator on the truncated basis, built from
/// the eigendecomposition of the hermitian generator.
ModeOperator displacement_matrix(Complex beta, int dim);

Complex inner_product(const FockVector& u, const FockVector& v);

/// <(-1)^n>; requires a normalized state.
double parity_expectation(const FockVector& state);

/// Total population of the top k levels — the share of the state that presses
/// against the truncation edge.  Requires 1 <= k < dim.
double truncation_tail(const FockVector& state, int k);

/// Apply the displacement D(beta) through its normal-ordered factorization
/// exp(-|b|^2/2) exp(b a+) exp(-b* a); both exponential series terminate in
/// the truncated space.  Agrees with displacement_matrix up to truncation
/// leakage, at O(dim^2) cost instead of O(dim^3).
FockVector apply_displacement(Complex beta, const FockVector& state);

FockVector apply_matrix(const ModeOperator& m, const FockVector& state);

} // namespace oal
