#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace defects {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Closed axis-aligned box in R^n. Evaluation outside a domain box is an
/// error, never an extrapolation.
struct Box {
    Vec lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Vec& x, double tol = 0.0) const;
    double extent(int axis) const { return hi[axis] - lo[axis]; }
    double max_extent() const;
    Vec center() const { return 0.5 * (lo + hi); }

    static Box cube(int n, double half_width);
    Box padded(double margin) const;
    bool contains_box(const Box& inner) const;
};

/// Sparse multivariate polynomial with small integer exponents.
struct Polynomial {
    struct Term {
        double coef;
        std::array<int, 4> exp;  // per-axis exponents
    };
    int n = 0;
    std::vector<Term> terms;

    double value(const Vec& x) const;
    Polynomial partial(int axis) const;
    static Polynomial constant(int n, double c);
    static Polynomial coordinate(int n, int axis);  // 1-based axis
};

/// Smooth scalar field on R^n returning exact values, first derivatives, and
/// (for families closed under differentiation) second derivatives. Immutable;
/// evaluation is pure.
class ScalarField {
public:
    ScalarField() = default;

    int dim() const;
    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    Mat hessian(const Vec& x) const;
    bool has_gradient() const;
    bool has_hessian() const;

    /// The field x -> d(this)/dx_axis (0-based axis); requires has_gradient.
    ScalarField partial(int axis) const;

    // families
    static ScalarField constant(int n, double c);
    static ScalarField coordinate(int n, int axis);  // 1-based
    static ScalarField polynomial(Polynomial p);
    /// Radial bump exp(1 - 1/(1 - s^2)), s = |x-c|/R inside, 0 outside.
    /// Values/derivatives are clamped to exactly 0 once s^2 > 1 - 1e-12.
    static ScalarField bump(const Vec& center, double radius);
    /// p(x) / (x1^2 + x2^2)^m with an r_min exclusion around the axis.
    static ScalarField rational_over_r2(Polynomial p, int m, double r_min = 1e-8);
    /// Piecewise constant across the hyperplane {x_axis = 0} (no gradient).
    static ScalarField halfspace_switch(int n, int axis, double lower, double upper);
    /// Opaque field from callables; gradient optional, hessian unavailable.
    static ScalarField from_function(int n, std::function<double(const Vec&)> value,
                                     std::function<Vec(const Vec&)> grad = nullptr);

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, double s);
    friend ScalarField operator*(double s, const ScalarField& a) { return a * s; }
    friend ScalarField operator/(const ScalarField& a, const ScalarField& b);

    struct Node;
    explicit ScalarField(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    const std::shared_ptr<const Node>& node() const { return node_; }

private:
    std::shared_ptr<const Node> node_;
};

}  // namespace defects
