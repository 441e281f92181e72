#pragma once

#include <optional>
#include <vector>

#include "defects/alternating.hpp"

namespace defects {

/// Linear subspace of R^n (or of its dual) given by a basis matrix whose
/// columns span the space. Basis non-uniqueness is factored out by comparing
/// orthogonal projectors.
class Subspace {
public:
    Subspace(int n, Mat basis);

    int ambient_dim() const { return n_; }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const Mat& basis() const { return basis_; }

    /// Orthogonal projector B (B^T B)^{-1} B^T.
    Mat projector() const;

    /// Frobenius distance of projectors; < 1e-10 counts as the same span.
    static double distance(const Subspace& a, const Subspace& b);

private:
    int n_;
    Mat basis_;
};

/// Kernel of A via complete-pivoting Gaussian elimination. Pivot threshold is
/// pivot_rel_tol times the largest entry of A. Returns an n x d basis matrix.
Mat kernel_basis(const Mat& a, double pivot_rel_tol = 1e-12);

struct Decomposability {
    bool decomposable = false;
    /// Max coefficient of (e_i . omega) ^ omega over basis directions,
    /// normalized by max|coeff|^2 (scale invariant).
    double residual = 0.0;
    /// Factors alpha^1,...,alpha^k with alpha^1 ^ ... ^ alpha^k = omega,
    /// when a factorization was recovered.
    std::vector<AlternatingTensor> factors;
};

/// Decomposability decision. Degrees 0, 1, n-1, n are always decomposable;
/// otherwise the Pluecker-type test (v . omega) ^ omega = 0 over basis vectors
/// decides within tolerance.
Decomposability is_decomposable(const AlternatingTensor& omega, double rel_tol = 1e-10);

/// Annihilator subspace {v : v . phi = 0} of a nonzero decomposable p-covector;
/// dimension is exactly n - p.
Subspace annihilator(const AlternatingTensor& phi);

}  // namespace defects
