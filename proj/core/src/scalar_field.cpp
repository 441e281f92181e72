#include "defects/scalar_field.hpp"

#include <cmath>
#include <stdexcept>

namespace defects {

bool Box::contains(const Vec& x, double tol) const {
    if (x.size() != lo.size()) return false;
    for (int i = 0; i < x.size(); ++i)
        if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    return true;
}

double Box::max_extent() const {
    double m = 0.0;
    for (int i = 0; i < lo.size(); ++i) m = std::max(m, hi[i] - lo[i]);
    return m;
}

Box Box::cube(int n, double half_width) {
    Box b;
    b.lo = Vec::Constant(n, -half_width);
    b.hi = Vec::Constant(n, half_width);
    return b;
}

Box Box::padded(double margin) const {
    Box b = *this;
    b.lo.array() -= margin;
    b.hi.array() += margin;
    return b;
}

bool Box::contains_box(const Box& inner) const {
    for (int i = 0; i < lo.size(); ++i)
        if (inner.lo[i] < lo[i] || inner.hi[i] > hi[i]) return false;
    return true;
}

double Polynomial::value(const Vec& x) const {
    double acc = 0.0;
    for (const auto& t : terms) {
        double v = t.coef;
        for (int a = 0; a < n; ++a)
            for (int e = 0; e < t.exp[static_cast<std::size_t>(a)]; ++e) v *= x[a];
        acc += v;
    }
    return acc;
}

Polynomial Polynomial::partial(int axis) const {
    Polynomial out;
    out.n = n;
    for (const auto& t : terms) {
        int e = t.exp[static_cast<std::size_t>(axis)];
        if (e == 0) continue;
        Term d = t;
        d.coef *= e;
        d.exp[static_cast<std::size_t>(axis)] = e - 1;
        out.terms.push_back(d);
    }
    return out;
}

Polynomial Polynomial::constant(int n, double c) {
    Polynomial p;
    p.n = n;
    if (c != 0.0) p.terms.push_back({c, {0, 0, 0, 0}});
    return p;
}

Polynomial Polynomial::coordinate(int n, int axis) {
    Polynomial p;
    p.n = n;
    Term t{1.0, {0, 0, 0, 0}};
    t.exp[static_cast<std::size_t>(axis - 1)] = 1;
    p.terms.push_back(t);
    return p;
}

// ---------------------------------------------------------------------------

struct ScalarField::Node {
    int n = 0;
    virtual ~Node() = default;
    virtual double value(const Vec& x) const = 0;
    virtual bool has_grad() const = 0;
    virtual bool has_hess() const { return false; }
    virtual Vec grad(const Vec& x) const {
        (void)x;
        throw std::runtime_error("ScalarField: gradient unavailable for this family");
    }
    virtual Mat hess(const Vec& x) const {
        (void)x;
        throw std::runtime_error("ScalarField: hessian unavailable for this family");
    }
};

namespace {

using Node = ScalarField::Node;
using NodePtr = std::shared_ptr<const Node>;

struct PolyNode final : Node {
    Polynomial p;
    std::vector<Polynomial> partials;
    std::vector<Polynomial> second_partials;  // row-major n x n

    explicit PolyNode(Polynomial poly) : p(std::move(poly)) {
        n = p.n;
        partials.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) partials.push_back(p.partial(i));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                second_partials.push_back(partials[static_cast<std::size_t>(i)].partial(j));
    }
    double value(const Vec& x) const override { return p.value(x); }
    bool has_grad() const override { return true; }
    bool has_hess() const override { return true; }
    Vec grad(const Vec& x) const override {
        Vec g(n);
        for (int i = 0; i < n; ++i) g[i] = partials[static_cast<std::size_t>(i)].value(x);
        return g;
    }
    Mat hess(const Vec& x) const override {
        Mat h(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                h(i, j) = second_partials[static_cast<std::size_t>(i * n + j)].value(x);
        return h;
    }
};

struct BumpNode final : Node {
    Vec center;
    double radius;
    static constexpr double kClamp = 1e-12;  // s^2 beyond 1 - kClamp evaluates to exact 0

    BumpNode(Vec c, double r) : center(std::move(c)), radius(r) {
        n = static_cast<int>(center.size());
        if (radius <= 0) throw std::invalid_argument("bump: radius must be positive");
    }
    double u_of(const Vec& x) const { return (x - center).squaredNorm() / (radius * radius); }
    double value(const Vec& x) const override {
        double u = u_of(x);
        if (u > 1.0 - kClamp) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - u));
    }
    bool has_grad() const override { return true; }
    bool has_hess() const override { return true; }
    Vec grad(const Vec& x) const override {
        double u = u_of(x);
        if (u > 1.0 - kClamp) return Vec::Zero(n);
        double b = std::exp(1.0 - 1.0 / (1.0 - u));
        double gp = -1.0 / ((1.0 - u) * (1.0 - u));
        Vec du = 2.0 * (x - center) / (radius * radius);
        return b * gp * du;
    }
    Mat hess(const Vec& x) const override {
        double u = u_of(x);
        if (u > 1.0 - kClamp) return Mat::Zero(n, n);
        double b = std::exp(1.0 - 1.0 / (1.0 - u));
        double om = 1.0 - u;
        double gp = -1.0 / (om * om);
        double gpp = -2.0 / (om * om * om);
        Vec du = 2.0 * (x - center) / (radius * radius);
        Mat h = b * (gpp + gp * gp) * (du * du.transpose());
        h += b * gp * (2.0 / (radius * radius)) * Mat::Identity(n, n);
        return h;
    }
};

struct RationalR2Node final : Node {
    Polynomial p;
    std::vector<Polynomial> dp;
    std::vector<Polynomial> ddp;
    int m;
    double r_min;

    RationalR2Node(Polynomial poly, int m_, double rmin) : p(std::move(poly)), m(m_), r_min(rmin) {
        n = p.n;
        if (n < 2) throw std::invalid_argument("rational_over_r2: needs n >= 2");
        for (int i = 0; i < n; ++i) dp.push_back(p.partial(i));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ddp.push_back(dp[static_cast<std::size_t>(i)].partial(j));
    }
    double rho(const Vec& x) const {
        double r2 = x[0] * x[0] + x[1] * x[1];
        if (r2 < r_min * r_min)
            throw std::domain_error("rational_over_r2: evaluation inside the axis exclusion r < r_min");
        return r2;
    }
    double value(const Vec& x) const override { return p.value(x) / std::pow(rho(x), m); }
    bool has_grad() const override { return true; }
    bool has_hess() const override { return true; }
    Vec grad(const Vec& x) const override {
        double r2 = rho(x);
        double rm = std::pow(r2, m);
        Vec drho = Vec::Zero(n);
        drho[0] = 2 * x[0];
        drho[1] = 2 * x[1];
        Vec g(n);
        double pv = p.value(x);
        for (int i = 0; i < n; ++i)
            g[i] = (dp[static_cast<std::size_t>(i)].value(x) - m * pv * drho[i] / r2) / rm;
        return g;
    }
    Mat hess(const Vec& x) const override {
        double r2 = rho(x);
        double rm = std::pow(r2, m);
        double pv = p.value(x);
        Vec drho = Vec::Zero(n);
        drho[0] = 2 * x[0];
        drho[1] = 2 * x[1];
        Mat ddrho = Mat::Zero(n, n);
        ddrho(0, 0) = 2;
        ddrho(1, 1) = 2;
        Vec pg(n);
        for (int i = 0; i < n; ++i) pg[i] = dp[static_cast<std::size_t>(i)].value(x);
        Mat h(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double pij = ddp[static_cast<std::size_t>(i * n + j)].value(x);
                double t = pij;
                t -= m / r2 * (pg[i] * drho[j] + pg[j] * drho[i] + pv * ddrho(i, j));
                t += m * (m + 1) / (r2 * r2) * pv * drho[i] * drho[j];
                h(i, j) = t / rm;
            }
        return h;
    }
};

struct HalfspaceNode final : Node {
    int axis;  // 0-based
    double lower, upper;
    HalfspaceNode(int n_, int axis_, double lo, double hi) : axis(axis_), lower(lo), upper(hi) {
        n = n_;
    }
    double value(const Vec& x) const override { return x[axis] >= 0.0 ? upper : lower; }
    bool has_grad() const override { return false; }
};

struct FunctionNode final : Node {
    std::function<double(const Vec&)> f;
    std::function<Vec(const Vec&)> g;
    FunctionNode(int n_, std::function<double(const Vec&)> f_, std::function<Vec(const Vec&)> g_)
        : f(std::move(f_)), g(std::move(g_)) {
        n = n_;
    }
    double value(const Vec& x) const override { return f(x); }
    bool has_grad() const override { return static_cast<bool>(g); }
    Vec grad(const Vec& x) const override {
        if (!g) return Node::grad(x);
        return g(x);
    }
};

struct SumNode final : Node {
    NodePtr a, b;
    double sb;
    SumNode(NodePtr a_, NodePtr b_, double sb_) : a(std::move(a_)), b(std::move(b_)), sb(sb_) {
        n = a->n;
        if (b->n != n) throw std::invalid_argument("ScalarField: dimension mismatch in sum");
    }
    double value(const Vec& x) const override { return a->value(x) + sb * b->value(x); }
    bool has_grad() const override { return a->has_grad() && b->has_grad(); }
    bool has_hess() const override { return a->has_hess() && b->has_hess(); }
    Vec grad(const Vec& x) const override { return a->grad(x) + sb * b->grad(x); }
    Mat hess(const Vec& x) const override { return a->hess(x) + sb * b->hess(x); }
};

struct ScaleNode final : Node {
    NodePtr a;
    double s;
    ScaleNode(NodePtr a_, double s_) : a(std::move(a_)), s(s_) { n = a->n; }
    double value(const Vec& x) const override { return s * a->value(x); }
    bool has_grad() const override { return a->has_grad(); }
    bool has_hess() const override { return a->has_hess(); }
    Vec grad(const Vec& x) const override { return s * a->grad(x); }
    Mat hess(const Vec& x) const override { return s * a->hess(x); }
};

struct ProductNode final : Node {
    NodePtr a, b;
    ProductNode(NodePtr a_, NodePtr b_) : a(std::move(a_)), b(std::move(b_)) {
        n = a->n;
        if (b->n != n) throw std::invalid_argument("ScalarField: dimension mismatch in product");
    }
    double value(const Vec& x) const override { return a->value(x) * b->value(x); }
    bool has_grad() const override { return a->has_grad() && b->has_grad(); }
    bool has_hess() const override { return a->has_hess() && b->has_hess(); }
    Vec grad(const Vec& x) const override {
        return a->value(x) * b->grad(x) + b->value(x) * a->grad(x);
    }
    Mat hess(const Vec& x) const override {
        Vec ga = a->grad(x), gb = b->grad(x);
        return a->value(x) * b->hess(x) + b->value(x) * a->hess(x) + ga * gb.transpose() +
               gb * ga.transpose();
    }
};

struct QuotientNode final : Node {
    NodePtr a, b;
    QuotientNode(NodePtr a_, NodePtr b_) : a(std::move(a_)), b(std::move(b_)) { n = a->n; }
    double value(const Vec& x) const override {
        double bv = b->value(x);
        if (bv == 0.0) throw std::domain_error("ScalarField: division by a vanishing field");
        return a->value(x) / bv;
    }
    bool has_grad() const override { return a->has_grad() && b->has_grad(); }
    Vec grad(const Vec& x) const override {
        double av = a->value(x), bv = b->value(x);
        if (bv == 0.0) throw std::domain_error("ScalarField: division by a vanishing field");
        return (a->grad(x) * bv - av * b->grad(x)) / (bv * bv);
    }
};

struct PartialNode final : Node {
    NodePtr base;
    int axis;
    PartialNode(NodePtr base_, int axis_) : base(std::move(base_)), axis(axis_) { n = base->n; }
    double value(const Vec& x) const override { return base->grad(x)[axis]; }
    bool has_grad() const override { return base->has_hess(); }
    Vec grad(const Vec& x) const override { return base->hess(x).row(axis); }
};

}  // namespace

int ScalarField::dim() const { return node_ ? node_->n : 0; }
double ScalarField::value(const Vec& x) const { return node_->value(x); }
Vec ScalarField::gradient(const Vec& x) const { return node_->grad(x); }
Mat ScalarField::hessian(const Vec& x) const { return node_->hess(x); }
bool ScalarField::has_gradient() const { return node_ && node_->has_grad(); }
bool ScalarField::has_hessian() const { return node_ && node_->has_hess(); }

ScalarField ScalarField::partial(int axis) const {
    if (!has_gradient()) throw std::runtime_error("ScalarField::partial: gradient unavailable");
    return ScalarField(std::make_shared<PartialNode>(node_, axis));
}

ScalarField ScalarField::constant(int n, double c) { return polynomial(Polynomial::constant(n, c)); }
ScalarField ScalarField::coordinate(int n, int axis) { return polynomial(Polynomial::coordinate(n, axis)); }
ScalarField ScalarField::polynomial(Polynomial p) {
    return ScalarField(std::make_shared<PolyNode>(std::move(p)));
}
ScalarField ScalarField::bump(const Vec& center, double radius) {
    return ScalarField(std::make_shared<BumpNode>(center, radius));
}
ScalarField ScalarField::rational_over_r2(Polynomial p, int m, double r_min) {
    return ScalarField(std::make_shared<RationalR2Node>(std::move(p), m, r_min));
}
ScalarField ScalarField::halfspace_switch(int n, int axis, double lower, double upper) {
    return ScalarField(std::make_shared<HalfspaceNode>(n, axis, lower, upper));
}
ScalarField ScalarField::from_function(int n, std::function<double(const Vec&)> value,
                                       std::function<Vec(const Vec&)> grad) {
    return ScalarField(std::make_shared<FunctionNode>(n, std::move(value), std::move(grad)));
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return ScalarField(std::make_shared<SumNode>(a.node(), b.node(), 1.0));
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return ScalarField(std::make_shared<SumNode>(a.node(), b.node(), -1.0));
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return ScalarField(std::make_shared<ProductNode>(a.node(), b.node()));
}
ScalarField operator*(const ScalarField& a, double s) {
    return ScalarField(std::make_shared<ScaleNode>(a.node(), s));
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
    return ScalarField(std::make_shared<QuotientNode>(a.node(), b.node()));
}

}  // namespace defects
