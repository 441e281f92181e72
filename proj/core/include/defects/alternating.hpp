#pragma once

#include <Eigen/Dense>

#include "defects/multi_index.hpp"

namespace defects {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Variance { Covariant, Contravariant };

/// Degree-k alternating tensor at a point: a k-covector (Covariant) or
/// k-vector (Contravariant) over R^n, stored densely on the increasing
/// multi-index basis. Degree 0 is a scalar; any degree > n is the empty
/// (identically zero) tensor.
class AlternatingTensor {
public:
    AlternatingTensor() = default;
    AlternatingTensor(int n, int degree, Variance var);

    static AlternatingTensor zero(int n, int degree, Variance var) {
        return AlternatingTensor(n, degree, var);
    }
    /// Unit basis element dx^mu (covariant) or e_mu (contravariant).
    static AlternatingTensor basis(int n, const MultiIndex& mu, Variance var);
    /// Degree-0 scalar.
    static AlternatingTensor scalar(int n, double value, Variance var);
    /// Degree-1 from a coefficient vector.
    static AlternatingTensor from_vector(const Vec& v, Variance var);

    int dim() const { return n_; }
    int degree() const { return k_; }
    Variance variance() const { return var_; }

    double coeff(const MultiIndex& mu) const;
    void set_coeff(const MultiIndex& mu, double value);
    double& raw(int i) { return coeffs_[i]; }
    double raw(int i) const { return coeffs_[i]; }
    const Vec& coefficients() const { return coeffs_; }
    Vec& coefficients() { return coeffs_; }

    double max_abs_coeff() const;
    bool is_zero(double tol = 0.0) const { return max_abs_coeff() <= tol; }

    /// Full evaluation on k argument vectors (covariant) or covectors
    /// (contravariant); arguments are coefficient vectors in the standard basis.
    double apply(const std::vector<Vec>& args) const;

    AlternatingTensor& operator+=(const AlternatingTensor& other);
    AlternatingTensor& operator-=(const AlternatingTensor& other);
    AlternatingTensor& operator*=(double s);

    friend AlternatingTensor operator+(AlternatingTensor a, const AlternatingTensor& b) { return a += b; }
    friend AlternatingTensor operator-(AlternatingTensor a, const AlternatingTensor& b) { return a -= b; }
    friend AlternatingTensor operator*(AlternatingTensor a, double s) { return a *= s; }
    friend AlternatingTensor operator*(double s, AlternatingTensor a) { return a *= s; }

private:
    int n_ = 0;
    int k_ = 0;
    Variance var_ = Variance::Covariant;
    Vec coeffs_;  // aligned with index_set(n_, k_)
};

/// Alternating product. Degrees add; a result of degree > n is the legal zero
/// tensor of that degree. Requires matching dimension and variance.
AlternatingTensor wedge(const AlternatingTensor& a, const AlternatingTensor& b);

/// Contraction of a p-covector omega with a vector v:
/// (v . omega)(w_1,...,w_{p-1}) = omega(v, w_1, ..., w_{p-1}).
AlternatingTensor contract_vector(const AlternatingTensor& v, const AlternatingTensor& omega);

/// Contraction with an m-vector, m <= deg(omega):
/// (V . omega)(W) = omega(V ^ W) for every (r-m)-vector W.
AlternatingTensor contract_multivector(const AlternatingTensor& mv, const AlternatingTensor& omega);

/// Inner contraction producing an (r-k)-vector from an r-vector V and a
/// k-covector omega, fixed by gamma(V L omega) = (gamma ^ omega)(V) for all
/// (r-k)-covectors gamma.
AlternatingTensor inner_fcontr(const AlternatingTensor& mv, const AlternatingTensor& omega);

/// Full pairing of a k-covector with a k-vector.
double pair_full(const AlternatingTensor& covector, const AlternatingTensor& vector);

/// Max absolute coefficient difference; tensors of degree > n compare as zero.
double max_abs_diff(const AlternatingTensor& a, const AlternatingTensor& b);

}  // namespace defects
