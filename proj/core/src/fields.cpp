#include "defects/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace defects {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat minor_matrix(const Mat& j, const MultiIndex& rows, const MultiIndex& cols) {
    const int k = rows.degree();
    Mat m(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) m(a, b) = j(rows[a] - 1, cols[b] - 1);
    return m;
}

}  // namespace

// --- MapBetweenCharts --------------------------------------------------------

MapBetweenCharts::MapBetweenCharts(Box source, std::function<Vec(const Vec&)> eval,
                                   std::function<Mat(const Vec&)> jacobian,
                                   std::function<Vec(const Vec&)> inverse)
    : source_(std::move(source)),
      eval_(std::move(eval)),
      jacobian_(std::move(jacobian)),
      inverse_(std::move(inverse)) {}

Vec MapBetweenCharts::operator()(const Vec& x) const {
    if (!source_.contains(x, 1e-12))
        throw std::domain_error("MapBetweenCharts: point outside source box");
    return eval_(x);
}

Vec MapBetweenCharts::inverse(const Vec& y) const {
    if (!inverse_) throw std::runtime_error("MapBetweenCharts: no inverse supplied");
    return inverse_(y);
}

MapBetweenCharts MapBetweenCharts::identity(const Box& box) {
    const int n = box.dim();
    return MapBetweenCharts(
        box, [](const Vec& x) { return x; },
        [n](const Vec&) { return Mat::Identity(n, n); }, [](const Vec& y) { return y; });
}

MapBetweenCharts MapBetweenCharts::affine(const Box& source, const Mat& a, const Vec& b) {
    std::function<Vec(const Vec&)> inv;
    Eigen::FullPivLU<Mat> lu(a);
    if (lu.isInvertible()) {
        Mat ainv = lu.inverse();
        inv = [ainv, b](const Vec& y) { return ainv * (y - b); };
    }
    return MapBetweenCharts(
        source, [a, b](const Vec& x) { return a * x + b; }, [a](const Vec&) { return a; }, inv);
}

MapBetweenCharts MapBetweenCharts::cylindrical_to_cartesian(const Box& source, double r_min) {
    if (source.lo[0] < r_min)
        throw std::invalid_argument("cylindrical chart: source box must keep r >= r_min");
    auto eval = [](const Vec& u) {
        Vec x(3);
        x << u[0] * std::cos(u[1]), u[0] * std::sin(u[1]), u[2];
        return x;
    };
    auto jac = [](const Vec& u) {
        Mat j(3, 3);
        j << std::cos(u[1]), -u[0] * std::sin(u[1]), 0.0,  //
            std::sin(u[1]), u[0] * std::cos(u[1]), 0.0,    //
            0.0, 0.0, 1.0;
        return j;
    };
    auto inv = [r_min](const Vec& x) {
        double r = std::hypot(x[0], x[1]);
        if (r < r_min) throw std::domain_error("cylindrical chart: point inside axis exclusion");
        Vec u(3);
        double th = std::atan2(x[1], x[0]);
        if (th < 0) th += 2 * kPi;
        u << r, th, x[2];
        return u;
    };
    return MapBetweenCharts(source, eval, jac, inv);
}

MapBetweenCharts MapBetweenCharts::compose(const MapBetweenCharts& outer,
                                           const MapBetweenCharts& inner) {
    auto in_eval = [inner](const Vec& x) { return inner(x); };
    auto eval = [outer, inner](const Vec& x) { return outer(inner(x)); };
    auto jac = [outer, inner, in_eval](const Vec& x) {
        return outer.jacobian(in_eval(x)) * inner.jacobian(x);
    };
    std::function<Vec(const Vec&)> inv;
    if (outer.has_inverse() && inner.has_inverse()) {
        inv = [outer, inner](const Vec& y) { return inner.inverse(outer.inverse(y)); };
    }
    return MapBetweenCharts(inner.source(), eval, jac, inv);
}

// --- DifferentialForm --------------------------------------------------------

DifferentialForm::DifferentialForm(int n, int degree, Box domain)
    : n_(n), deg_(degree), domain_(std::move(domain)) {
    if (degree < 0) throw std::invalid_argument("DifferentialForm: negative degree");
    // degree > n carries no components and is the legal zero form of that degree
    coeffs_.resize(static_cast<std::size_t>(index_count(n, degree)));
    for (auto& c : coeffs_) c = ScalarField::constant(n, 0.0);
}

const ScalarField& DifferentialForm::coeff(const MultiIndex& mu) const {
    int pos = index_position(n_, mu);
    if (pos < 0) throw std::invalid_argument("DifferentialForm::coeff: bad index");
    return coeffs_[static_cast<std::size_t>(pos)];
}

void DifferentialForm::set_coeff(const MultiIndex& mu, ScalarField f) {
    int pos = index_position(n_, mu);
    if (pos < 0) throw std::invalid_argument("DifferentialForm::set_coeff: bad index");
    coeffs_[static_cast<std::size_t>(pos)] = std::move(f);
}

AlternatingTensor DifferentialForm::operator()(const Vec& x) const {
    if (!domain_.contains(x, 1e-12))
        throw std::domain_error("DifferentialForm: evaluation outside domain box");
    AlternatingTensor t(n_, deg_, Variance::Covariant);
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i)
        t.raw(i) = coeffs_[static_cast<std::size_t>(i)].value(x);
    return t;
}

bool DifferentialForm::derivative_available() const {
    if (d_supplier_) return true;
    for (const auto& c : coeffs_)
        if (!c.has_gradient()) return false;
    return true;
}

DifferentialForm DifferentialForm::exterior_derivative() const {
    if (d_supplier_) return d_supplier_();
    DifferentialForm out(n_, deg_ + 1, domain_);
    if (deg_ >= n_) return out;  // top degree: d vanishes identically
    const auto& src = index_set(n_, deg_);
    const auto& dst = index_set(n_, deg_ + 1);
    std::vector<ScalarField> acc(dst.size());
    std::vector<bool> touched(dst.size(), false);
    for (std::size_t s = 0; s < src.size(); ++s) {
        const ScalarField& c = coeffs_[s];
        if (!c.has_gradient())
            throw std::runtime_error("exterior_derivative: coefficient gradient unavailable");
        for (int axis = 1; axis <= n_; ++axis) {
            MergeResult m = merge_axis(axis, src[s]);
            if (m.degenerate) continue;
            int pos = index_position(n_, m.merged);
            ScalarField term = c.partial(axis - 1) * double(m.sign);
            if (!touched[static_cast<std::size_t>(pos)]) {
                acc[static_cast<std::size_t>(pos)] = term;
                touched[static_cast<std::size_t>(pos)] = true;
            } else {
                acc[static_cast<std::size_t>(pos)] = acc[static_cast<std::size_t>(pos)] + term;
            }
        }
    }
    for (std::size_t d = 0; d < dst.size(); ++d)
        if (touched[d]) out.set_coeff(dst[d], acc[d]);
    out.support_ = support_;
    return out;
}

DifferentialForm DifferentialForm::with_support(SupportBall ball) const {
    DifferentialForm out = *this;
    out.support_ = std::move(ball);
    return out;
}

DifferentialForm DifferentialForm::with_domain(Box box) const {
    DifferentialForm out = *this;
    out.domain_ = std::move(box);
    return out;
}

DifferentialForm DifferentialForm::with_derivative_supplier(std::function<DifferentialForm()> d) const {
    DifferentialForm out = *this;
    out.d_supplier_ = std::move(d);
    return out;
}

namespace {

std::optional<SupportBall> merge_supports(const std::optional<SupportBall>& a,
                                          const std::optional<SupportBall>& b,
                                          bool intersection_like) {
    if (intersection_like) {
        // support of a product vanishes outside either ball: keep the smaller
        if (a && b) return (a->radius <= b->radius) ? a : b;
        if (a) return a;
        return b;
    }
    // sum: need a ball containing both
    if (a && b) {
        Vec d = b->center - a->center;
        double dist = d.norm();
        double r = (dist + a->radius + b->radius) / 2.0;
        if (r <= a->radius) return a;
        if (r <= b->radius) return b;
        Vec c = a->center + (r - a->radius) * (dist > 0 ? Vec(d / dist) : Vec(Vec::Zero(d.size())));
        return SupportBall{c, r};
    }
    return std::nullopt;
}

}  // namespace

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
    if (a.dim() != b.dim() || a.degree() != b.degree())
        throw std::invalid_argument("form sum: shape mismatch");
    DifferentialForm out(a.dim(), a.degree(), a.domain());
    const auto& set = index_set(a.dim(), a.degree());
    for (const auto& mu : set) out.set_coeff(mu, a.coeff(mu) + b.coeff(mu));
    if (a.derivative_available() && b.derivative_available()) {
        DifferentialForm ca = a, cb = b;
        out = out.with_derivative_supplier(
            [ca, cb]() { return ca.exterior_derivative() + cb.exterior_derivative(); });
    }
    auto sup = merge_supports(a.support(), b.support(), false);
    if (sup) out = out.with_support(*sup);
    return out;
}

DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) {
    return a + b * (-1.0);
}

DifferentialForm operator*(const DifferentialForm& a, double s) {
    DifferentialForm out(a.dim(), a.degree(), a.domain());
    const auto& set = index_set(a.dim(), a.degree());
    for (const auto& mu : set) out.set_coeff(mu, a.coeff(mu) * s);
    if (a.derivative_available()) {
        DifferentialForm ca = a;
        out = out.with_derivative_supplier([ca, s]() { return ca.exterior_derivative() * s; });
    }
    if (a.support()) out = out.with_support(*a.support());
    return out;
}

// --- VectorField / MultivectorField ------------------------------------------

VectorField::VectorField(std::vector<ScalarField> components, Box domain)
    : comps_(std::move(components)), domain_(std::move(domain)) {}

Vec VectorField::operator()(const Vec& x) const {
    if (!domain_.contains(x, 1e-12))
        throw std::domain_error("VectorField: evaluation outside domain box");
    Vec v(dim());
    for (int i = 0; i < dim(); ++i) v[i] = comps_[static_cast<std::size_t>(i)].value(x);
    return v;
}

VectorField VectorField::constant(const Vec& v, Box domain) {
    std::vector<ScalarField> comps;
    for (int i = 0; i < v.size(); ++i)
        comps.push_back(ScalarField::constant(static_cast<int>(v.size()), v[i]));
    return VectorField(std::move(comps), std::move(domain));
}

VectorField VectorField::from_polynomials(std::vector<Polynomial> comps, Box domain) {
    std::vector<ScalarField> fields;
    for (auto& p : comps) fields.push_back(ScalarField::polynomial(std::move(p)));
    return VectorField(std::move(fields), std::move(domain));
}

MultivectorField::MultivectorField(int n, int degree, Box domain)
    : n_(n), deg_(degree), domain_(std::move(domain)) {
    coeffs_.resize(static_cast<std::size_t>(index_count(n, degree)));
    for (auto& c : coeffs_) c = ScalarField::constant(n, 0.0);
}

void MultivectorField::set_coeff(const MultiIndex& mu, ScalarField f) {
    int pos = index_position(n_, mu);
    if (pos < 0) throw std::invalid_argument("MultivectorField::set_coeff: bad index");
    coeffs_[static_cast<std::size_t>(pos)] = std::move(f);
}

AlternatingTensor MultivectorField::operator()(const Vec& x) const {
    AlternatingTensor t(n_, deg_, Variance::Contravariant);
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i)
        t.raw(i) = coeffs_[static_cast<std::size_t>(i)].value(x);
    return t;
}

MultivectorField MultivectorField::from_vector_field(const VectorField& w) {
    MultivectorField mv(w.dim(), 1, w.domain());
    for (int i = 1; i <= w.dim(); ++i) mv.set_coeff(MultiIndex{i}, w.component(i - 1));
    return mv;
}

MultivectorField MultivectorField::constant(const AlternatingTensor& t, Box domain) {
    if (t.variance() != Variance::Contravariant)
        throw std::invalid_argument("MultivectorField::constant: expects a multivector");
    MultivectorField mv(t.dim(), t.degree(), std::move(domain));
    const auto& set = index_set(t.dim(), t.degree());
    for (std::size_t i = 0; i < set.size(); ++i)
        mv.set_coeff(set[i], ScalarField::constant(t.dim(), t.raw(static_cast<int>(i))));
    return mv;
}

// --- operations ---------------------------------------------------------------

AlternatingTensor eval_form(const DifferentialForm& omega, const Vec& x) { return omega(x); }

DifferentialForm exterior_derivative(const DifferentialForm& omega) {
    return omega.exterior_derivative();
}

DifferentialForm pullback(const MapBetweenCharts& f, const DifferentialForm& omega) {
    const int n = omega.dim();
    const int p = omega.degree();
    DifferentialForm out(n, p, f.source());
    const auto& set = index_set(n, p);
    DifferentialForm om = omega;
    MapBetweenCharts map = f;
    for (const auto& mu : set) {
        auto value = [om, map, mu, n, p](const Vec& x) {
            Vec y = map(x);
            AlternatingTensor w = om(y);
            if (p == 0) return w.raw(0);
            Mat j = map.jacobian(x);
            double acc = 0.0;
            const auto& rows = index_set(n, p);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                double c = w.raw(static_cast<int>(r));
                if (c == 0.0) continue;
                acc += c * minor_matrix(j, rows[r], mu).determinant();
            }
            return acc;
        };
        out.set_coeff(mu, ScalarField::from_function(n, value));
    }
    if (om.derivative_available())
        out = out.with_derivative_supplier([map, om]() { return pullback(map, om.exterior_derivative()); });
    // Transported support: conservative ball through the inverse map when available.
    if (omega.support() && f.has_inverse()) {
        const auto& ball = *omega.support();
        Vec c = f.inverse(ball.center);
        double r = 0.0;
        const int samples = 24;
        for (int s = 0; s < samples; ++s) {
            Vec dir = Vec::Zero(n);
            // crude sphere sampling: axes and diagonals
            for (int i = 0; i < n; ++i) dir[i] = std::cos(2.0 * kPi * (s + 1) * (i + 1) / samples);
            if (dir.norm() == 0.0) continue;
            dir.normalize();
            Vec y = ball.center + ball.radius * dir;
            r = std::max(r, (f.inverse(y) - c).norm());
        }
        out = out.with_support(SupportBall{c, 1.25 * r});
    }
    return out;
}

DifferentialForm contract(const MultivectorField& mv, const DifferentialForm& omega) {
    const int n = omega.dim();
    const int m = mv.degree();
    const int r = omega.degree();
    if (m > r) throw std::invalid_argument("contract: multivector degree exceeds form degree");
    DifferentialForm out(n, r - m, omega.domain());
    const auto& target = index_set(n, r - m);
    const auto& source = index_set(n, m);
    for (const auto& nu : target) {
        ScalarField acc = ScalarField::constant(n, 0.0);
        bool touched = false;
        for (const auto& mu : source) {
            MergeResult mg = merge_indices(mu, nu);
            if (mg.degenerate) continue;
            int mv_pos = index_position(n, mu);
            int om_pos = index_position(n, mg.merged);
            ScalarField term = (mv.coeff(mv_pos) * omega.coeff(om_pos)) * double(mg.sign);
            acc = touched ? acc + term : term;
            touched = true;
        }
        if (touched) out.set_coeff(nu, acc);
    }
    if (omega.support()) out = out.with_support(*omega.support());
    return out;
}

DifferentialForm contract(const VectorField& w, const DifferentialForm& omega) {
    return contract(MultivectorField::from_vector_field(w), omega);
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
    const int n = a.dim();
    const int p = a.degree(), q = b.degree();
    DifferentialForm out(n, p + q, a.domain());
    if (p + q > n) return out;  // legal zero form of that degree
    const auto& sa = index_set(n, p);
    const auto& sb = index_set(n, q);
    const auto& dst = index_set(n, p + q);
    std::vector<ScalarField> acc(dst.size());
    std::vector<bool> touched(dst.size(), false);
    for (const auto& mu : sa)
        for (const auto& nu : sb) {
            MergeResult mg = merge_indices(mu, nu);
            if (mg.degenerate) continue;
            int pos = index_position(n, mg.merged);
            ScalarField term = (a.coeff(mu) * b.coeff(nu)) * double(mg.sign);
            if (!touched[static_cast<std::size_t>(pos)]) {
                acc[static_cast<std::size_t>(pos)] = term;
                touched[static_cast<std::size_t>(pos)] = true;
            } else {
                acc[static_cast<std::size_t>(pos)] = acc[static_cast<std::size_t>(pos)] + term;
            }
        }
    for (std::size_t i = 0; i < dst.size(); ++i)
        if (touched[i]) out.set_coeff(dst[i], acc[i]);

    if (a.derivative_available() && b.derivative_available() && p + q + 1 <= n) {
        DifferentialForm ca = a, cb = b;
        double sgn = (p % 2 == 0) ? 1.0 : -1.0;
        out = out.with_derivative_supplier([ca, cb, sgn]() {
            return wedge(ca.exterior_derivative(), cb) + wedge(ca, cb.exterior_derivative()) * sgn;
        });
    }
    auto sup = merge_supports(a.support(), b.support(), true);
    if (sup) out = out.with_support(*sup);
    return out;
}

DifferentialForm lie_derivative(const VectorField& w, const DifferentialForm& omega) {
    DifferentialForm d_omega = omega.exterior_derivative();
    DifferentialForm second = contract(w, d_omega);
    if (omega.degree() == 0) return second;
    DifferentialForm first = contract(w, omega).exterior_derivative();
    return first + second;
}

VectorField director_field(const DifferentialForm& phi, const DifferentialForm& theta,
                           const std::vector<Vec>& samples, double tol) {
    const int n = phi.dim();
    if (phi.degree() != n - 1 || theta.degree() != n)
        throw std::invalid_argument("director_field: expects an (n-1)-form and a volume form");
    const ScalarField& theta0 = theta.coeff(0);
    for (const auto& x : samples)
        if (theta0.value(x) == 0.0)
            throw std::invalid_argument("director_field: volume form vanishes at a sample point");

    std::vector<ScalarField> comps;
    for (int i = 1; i <= n; ++i) {
        MultiIndex mu = MultiIndex{i}.complement(n);
        double sgn = (i % 2 == 1) ? 1.0 : -1.0;  // (-1)^{i-1}
        comps.push_back((phi.coeff(mu) * sgn) / theta0);
    }
    VectorField u(std::move(comps), phi.domain());

    // u . theta = phi, checked pointwise on the sample grid
    MultivectorField mv = MultivectorField::from_vector_field(u);
    for (const auto& x : samples) {
        AlternatingTensor lhs = contract_multivector(mv(x), theta(x));
        double diff = max_abs_diff(lhs, phi(x));
        if (diff > tol * std::max(1.0, phi(x).max_abs_coeff()))
            throw std::runtime_error("director_field: u . theta != phi at a sample point");
    }
    return u;
}

FrobeniusResult frobenius_check(const DifferentialForm& phi, const std::vector<Vec>& samples,
                                double rel_tol) {
    const int n = phi.dim();
    const int p = phi.degree();
    FrobeniusResult out;
    for (const auto& x : samples) {
        auto dec = is_decomposable(phi(x));
        if (!dec.decomposable)
            throw std::invalid_argument("frobenius_check: form not decomposable at a sample point");
    }
    if (p == n - 1) {
        out.involutive = true;  // line distributions integrate along flows
        out.residual = 0.0;
        return out;
    }
    if (p != 1)
        throw std::invalid_argument(
            "frobenius_check: only degrees 1 and n-1 are supported; general ideal membership is out of scope");

    DifferentialForm dphi = phi.exterior_derivative();
    double worst = 0.0;
    double scale = 0.0;
    for (const auto& x : samples) {
        AlternatingTensor probe = wedge(dphi(x), phi(x));
        worst = std::max(worst, probe.max_abs_coeff());
        scale = std::max(scale, dphi(x).max_abs_coeff() * phi(x).max_abs_coeff());
    }
    out.residual = worst;
    out.involutive = worst <= rel_tol * std::max(scale, 1e-30);
    return out;
}

// --- ready-made forms ----------------------------------------------------------

DifferentialForm polynomial_form(int n, int degree, Box domain,
                                 const std::vector<std::pair<MultiIndex, Polynomial>>& coeffs) {
    DifferentialForm out(n, degree, std::move(domain));
    for (const auto& [mu, p] : coeffs) out.set_coeff(mu, ScalarField::polynomial(p));
    return out;
}

DifferentialForm test_form(int n, int degree, Box domain, const Vec& center, double radius,
                           const std::vector<std::pair<MultiIndex, Polynomial>>& poly_parts) {
    DifferentialForm out(n, degree, std::move(domain));
    ScalarField b = ScalarField::bump(center, radius);
    for (const auto& [mu, p] : poly_parts) out.set_coeff(mu, ScalarField::polynomial(p) * b);
    return out.with_support(SupportBall{center, radius});
}

namespace {

DifferentialForm dtheta_form(Box domain, double r_min) {
    // d theta = (x dy - y dx) / (x^2 + y^2)
    DifferentialForm out(3, 1, std::move(domain));
    Polynomial mx = Polynomial::coordinate(3, 1);
    Polynomial my = Polynomial::coordinate(3, 2);
    my.terms[0].coef = -1.0;
    out.set_coeff(MultiIndex{1}, ScalarField::rational_over_r2(my, 1, r_min));
    out.set_coeff(MultiIndex{2}, ScalarField::rational_over_r2(mx, 1, r_min));
    return out;
}

}  // namespace

DifferentialForm screw_form(double b, Box domain, double r_min) {
    DifferentialForm dz(3, 1, domain);
    dz.set_coeff(MultiIndex{3}, ScalarField::constant(3, 1.0));
    return dtheta_form(domain, r_min) * (-b / (2.0 * kPi)) + dz;
}

DifferentialForm book_form(double b, Box domain, double r_min) {
    return dtheta_form(domain, r_min) * (-b / (2.0 * kPi));
}

DifferentialForm dtheta_wedge_dz(Box domain, double r_min) {
    DifferentialForm dz(3, 1, domain);
    dz.set_coeff(MultiIndex{3}, ScalarField::constant(3, 1.0));
    return wedge(dtheta_form(domain, r_min), dz);
}

DifferentialForm interface_form(int n, Box domain, const AlternatingTensor& lower,
                                const AlternatingTensor& upper) {
    if (lower.degree() != n - 1 || upper.degree() != n - 1)
        throw std::invalid_argument("interface_form: expects (n-1)-covectors");
    DifferentialForm out(n, n - 1, std::move(domain));
    const auto& set = index_set(n, n - 1);
    for (std::size_t i = 0; i < set.size(); ++i)
        out.set_coeff(set[i], ScalarField::halfspace_switch(n, n - 1, lower.raw(static_cast<int>(i)),
                                                            upper.raw(static_cast<int>(i))));
    return out;
}

}  // namespace defects
