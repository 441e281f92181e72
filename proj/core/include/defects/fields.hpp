#pragma once

#include <functional>
#include <optional>
#include <string>

#include "defects/alternating.hpp"
#include "defects/scalar_field.hpp"
#include "defects/subspace.hpp"

namespace defects {

/// Closed ball recording where a compactly supported form is allowed to be
/// nonzero. Used for admissibility checks when pairing with currents.
struct SupportBall {
    Vec center;
    double radius = 0.0;
};

/// Smooth map between chart domains of R^n with an exact Jacobian and an
/// optional exact inverse. Exterior derivatives are never pushed through a
/// map; pullbacks differentiate via naturality instead.
class MapBetweenCharts {
public:
    MapBetweenCharts() = default;
    MapBetweenCharts(Box source, std::function<Vec(const Vec&)> eval,
                     std::function<Mat(const Vec&)> jacobian,
                     std::function<Vec(const Vec&)> inverse = nullptr);

    const Box& source() const { return source_; }
    Vec operator()(const Vec& x) const;
    Mat jacobian(const Vec& x) const { return jacobian_(x); }
    bool has_inverse() const { return static_cast<bool>(inverse_); }
    Vec inverse(const Vec& y) const;

    static MapBetweenCharts identity(const Box& box);
    static MapBetweenCharts affine(const Box& source, const Mat& a, const Vec& b);
    /// (r, theta, z) -> (r cos theta, r sin theta, z); source box must keep
    /// r >= r_min.
    static MapBetweenCharts cylindrical_to_cartesian(const Box& source, double r_min = 1e-8);

    static MapBetweenCharts compose(const MapBetweenCharts& outer, const MapBetweenCharts& inner);

private:
    Box source_;
    std::function<Vec(const Vec&)> eval_;
    std::function<Mat(const Vec&)> jacobian_;
    std::function<Vec(const Vec&)> inverse_;
};

/// Degree-p differential form on a chart box, with scalar-field coefficients
/// on the increasing multi-index basis. Immutable; evaluation is pure.
class DifferentialForm {
public:
    DifferentialForm() = default;
    DifferentialForm(int n, int degree, Box domain);

    int dim() const { return n_; }
    int degree() const { return deg_; }
    const Box& domain() const { return domain_; }

    const ScalarField& coeff(int position) const { return coeffs_[static_cast<std::size_t>(position)]; }
    const ScalarField& coeff(const MultiIndex& mu) const;
    void set_coeff(const MultiIndex& mu, ScalarField f);

    /// Pointwise evaluation; domain-checked.
    AlternatingTensor operator()(const Vec& x) const;

    /// d of this form. Uses the coefficient partials, unless the form carries
    /// a derivative supplier (pullbacks, sums of such).
    DifferentialForm exterior_derivative() const;
    bool derivative_available() const;

    const std::optional<SupportBall>& support() const { return support_; }
    DifferentialForm with_support(SupportBall ball) const;
    DifferentialForm with_domain(Box box) const;
    DifferentialForm with_derivative_supplier(std::function<DifferentialForm()> d) const;

    friend DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b);
    friend DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b);
    friend DifferentialForm operator*(const DifferentialForm& a, double s);
    friend DifferentialForm operator*(double s, const DifferentialForm& a) { return a * s; }

private:
    int n_ = 0;
    int deg_ = 0;
    Box domain_;
    std::vector<ScalarField> coeffs_;
    std::function<DifferentialForm()> d_supplier_;
    std::optional<SupportBall> support_;
};

/// Vector field with scalar-field components.
class VectorField {
public:
    VectorField() = default;
    VectorField(std::vector<ScalarField> components, Box domain);

    int dim() const { return static_cast<int>(comps_.size()); }
    const Box& domain() const { return domain_; }
    const ScalarField& component(int i) const { return comps_[static_cast<std::size_t>(i)]; }
    Vec operator()(const Vec& x) const;

    static VectorField constant(const Vec& v, Box domain);
    static VectorField from_polynomials(std::vector<Polynomial> comps, Box domain);

private:
    std::vector<ScalarField> comps_;
    Box domain_;
};

/// Degree-m multivector field (contravariant coefficients on increasing
/// multi-indices).
class MultivectorField {
public:
    MultivectorField() = default;
    MultivectorField(int n, int degree, Box domain);

    int dim() const { return n_; }
    int degree() const { return deg_; }
    const Box& domain() const { return domain_; }
    const ScalarField& coeff(int position) const { return coeffs_[static_cast<std::size_t>(position)]; }
    void set_coeff(const MultiIndex& mu, ScalarField f);
    AlternatingTensor operator()(const Vec& x) const;

    static MultivectorField from_vector_field(const VectorField& w);
    static MultivectorField constant(const AlternatingTensor& mv, Box domain);

private:
    int n_ = 0;
    int deg_ = 0;
    Box domain_;
    std::vector<ScalarField> coeffs_;
};

// --- operations -------------------------------------------------------------

/// Pointwise evaluation (domain-checked); identical to form(x).
AlternatingTensor eval_form(const DifferentialForm& omega, const Vec& x);

/// Exterior derivative (free-function spelling of the member).
DifferentialForm exterior_derivative(const DifferentialForm& omega);

/// Pullback f*omega. Coefficients are assembled from Jacobian minors; the
/// exterior derivative of the result is supplied as f*(d omega) by naturality.
DifferentialForm pullback(const MapBetweenCharts& f, const DifferentialForm& omega);

/// Contraction of a form with a vector field (degree drops by one).
DifferentialForm contract(const VectorField& w, const DifferentialForm& omega);

/// Contraction of a form with a multivector field (degree drops by deg mv).
DifferentialForm contract(const MultivectorField& mv, const DifferentialForm& omega);

/// Pointwise wedge with product-rule coefficients.
DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);

/// Lie derivative via Cartan's formula d(w . omega) + w . d omega.
DifferentialForm lie_derivative(const VectorField& w, const DifferentialForm& omega);

/// Director field u with u . theta = phi for a degree-(n-1) form phi and a
/// nowhere-zero volume form theta: u^i = (-1)^{i-1} phi_{1..^i..n} / theta_0.
/// Validates u . theta = phi and theta != 0 on a sample grid.
VectorField director_field(const DifferentialForm& phi, const DifferentialForm& theta,
                           const std::vector<Vec>& samples, double tol = 1e-10);

struct FrobeniusResult {
    bool involutive = false;
    double residual = 0.0;  // max |d phi ^ phi| coefficient over samples (p = 1)
};

/// Involutivity of the distribution induced by a decomposable form; p = 1 uses
/// d phi ^ phi = 0, p = n-1 is always involutive. Other degrees are out of
/// scope and rejected.
FrobeniusResult frobenius_check(const DifferentialForm& phi, const std::vector<Vec>& samples,
                                double rel_tol = 1e-9);

// --- ready-made forms --------------------------------------------------------

/// A polynomial-coefficient form (exact derivatives of all orders).
DifferentialForm polynomial_form(int n, int degree, Box domain,
                                 const std::vector<std::pair<MultiIndex, Polynomial>>& coeffs);

/// Test form: every coefficient is polynomial x bump(center, radius); compact
/// support inside the ball is recorded for admissibility checks.
DifferentialForm test_form(int n, int degree, Box domain, const Vec& center, double radius,
                           const std::vector<std::pair<MultiIndex, Polynomial>>& poly_parts);

/// Layering form -(b / 2 pi) d theta + dz on the complement of the z-axis.
DifferentialForm screw_form(double b, Box domain, double r_min = 1e-8);
/// Book form -(b / 2 pi) d theta.
DifferentialForm book_form(double b, Box domain, double r_min = 1e-8);
/// d theta ^ dz (directors emanating from the z-axis).
DifferentialForm dtheta_wedge_dz(Box domain, double r_min = 1e-8);
/// Piecewise-uniform (n-1)-form: lower/upper coefficient arrays per half-space
/// x_n < 0 / x_n >= 0.
DifferentialForm interface_form(int n, Box domain, const AlternatingTensor& lower,
                                const AlternatingTensor& upper);

}  // namespace defects
