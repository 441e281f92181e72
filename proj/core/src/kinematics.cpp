#include "defects/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace defects {

TimeVelocity::TimeVelocity(Box domain, std::function<Vec(double, const Vec&)> eval,
                           std::function<VectorField(double)> frozen)
    : domain_(std::move(domain)), eval_(std::move(eval)), frozen_(std::move(frozen)) {}

namespace {

std::function<double(double)> unit_rate() {
    return [](double) { return 1.0; };
}

TimeVelocity from_polynomials(std::vector<Polynomial> comps, Box domain,
                              std::function<double(double)> rate) {
    if (!rate) rate = unit_rate();
    auto frozen = [comps, domain, rate](double t) {
        std::vector<ScalarField> fields;
        for (const auto& p : comps) fields.push_back(ScalarField::polynomial(p) * rate(t));
        return VectorField(std::move(fields), domain);
    };
    auto eval = [comps, rate](double t, const Vec& x) {
        Vec v(static_cast<int>(comps.size()));
        for (std::size_t i = 0; i < comps.size(); ++i) v[static_cast<int>(i)] = comps[i].value(x);
        return Vec(rate(t) * v);
    };
    return TimeVelocity(domain, eval, frozen);
}

}  // namespace

TimeVelocity TimeVelocity::translation(const Vec& c, Box domain, std::function<double(double)> rate) {
    const int n = static_cast<int>(c.size());
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) comps.push_back(Polynomial::constant(n, c[i]));
    return from_polynomials(std::move(comps), std::move(domain), std::move(rate));
}

TimeVelocity TimeVelocity::rotation_z(double omega, Box domain, std::function<double(double)> rate) {
    const int n = domain.dim();
    if (n < 2) throw std::invalid_argument("rotation_z: needs n >= 2");
    std::vector<Polynomial> comps;
    Polynomial mx = Polynomial::coordinate(n, 2);
    mx.terms[0].coef = -omega;
    Polynomial py = Polynomial::coordinate(n, 1);
    py.terms[0].coef = omega;
    comps.push_back(mx);  // -omega y
    comps.push_back(py);  //  omega x
    for (int i = 2; i < n; ++i) comps.push_back(Polynomial::constant(n, 0.0));
    return from_polynomials(std::move(comps), std::move(domain), std::move(rate));
}

TimeVelocity TimeVelocity::linear(const Mat& a, Box domain, std::function<double(double)> rate) {
    const int n = static_cast<int>(a.rows());
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) {
        Polynomial p;
        p.n = n;
        for (int j = 0; j < n; ++j) {
            if (a(i, j) == 0.0) continue;
            Polynomial::Term t{a(i, j), {0, 0, 0, 0}};
            t.exp[static_cast<std::size_t>(j)] = 1;
            p.terms.push_back(t);
        }
        comps.push_back(p);
    }
    return from_polynomials(std::move(comps), std::move(domain), std::move(rate));
}

TimeVelocity TimeVelocity::shear(double kappa, Box domain, std::function<double(double)> rate) {
    const int n = domain.dim();
    std::vector<Polynomial> comps;
    Polynomial p;
    p.n = n;
    Polynomial::Term t{kappa, {0, 0, 0, 0}};
    t.exp[1] = 1;  // kappa * y in the x slot
    p.terms.push_back(t);
    comps.push_back(p);
    for (int i = 1; i < n; ++i) comps.push_back(Polynomial::constant(n, 0.0));
    return from_polynomials(std::move(comps), std::move(domain), std::move(rate));
}

// --- Flow -------------------------------------------------------------------------

Flow::Flow(TimeVelocity velocity, double t_begin, double t_end, double dt)
    : vel_(std::move(velocity)), a_(t_begin), b_(t_end), dt_(dt) {
    if (!(t_end > t_begin)) throw std::invalid_argument("Flow: empty time interval");
    if (dt <= 0) throw std::invalid_argument("Flow: step must be positive");
}

Vec Flow::map(double tau, double t, const Vec& x) const {
    const double lo = std::min(tau, t), hi = std::max(tau, t);
    if (lo < a_ - 1e-12 || hi > b_ + 1e-12)
        throw std::invalid_argument("Flow::map: times outside the flow interval");
    if (tau == t) return x;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(tau - t) / dt_)));
    const double h = (tau - t) / steps;
    Vec y = x;
    double s = t;
    for (int i = 0; i < steps; ++i) {
        Vec k1 = vel_(s, y);
        Vec k2 = vel_(s + 0.5 * h, y + 0.5 * h * k1);
        Vec k3 = vel_(s + 0.5 * h, y + 0.5 * h * k2);
        Vec k4 = vel_(s + h, y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s += h;
        if (!vel_.domain().contains(y, 1e-9))
            throw std::domain_error("Flow::map: trajectory left the chart box");
    }
    return y;
}

Mat Flow::tangent(double tau, double t, const Vec& x) const {
    const int n = static_cast<int>(x.size());
    const double h = fd_step_ * std::max(1.0, x.cwiseAbs().maxCoeff());
    Mat j(n, n);
    for (int c = 0; c < n; ++c) {
        Vec xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        j.col(c) = (map(tau, t, xp) - map(tau, t, xm)) / (2.0 * h);
    }
    return j;
}

MapBetweenCharts Flow::as_map(double tau, double t) const {
    Flow copy = *this;
    return MapBetweenCharts(
        vel_.domain(), [copy, tau, t](const Vec& x) { return copy.map(tau, t, x); },
        [copy, tau, t](const Vec& x) { return copy.tangent(tau, t, x); },
        [copy, tau, t](const Vec& y) { return copy.map(t, tau, y); });
}

double Flow::inverse_velocity_residual(double t, const Vec& x, double dtau) const {
    // inverse flow Psi_{tau,t} = Phi_{t,tau}; its velocity at tau = t by
    // central differences
    Vec vplus = map(t, t + dtau, x);
    Vec vminus = map(t, t - dtau, x);
    Vec w_inv = (vplus - vminus) / (2.0 * dtau);
    return (w_inv + vel_(t, x)).norm();
}

// --- rates -------------------------------------------------------------------------

DifferentialForm structure_form_rate(const Flow& flow, const DifferentialForm& phi, double t) {
    VectorField w_t = flow.velocity().frozen(t);
    return lie_derivative(w_t, phi) * (-1.0);
}

Current pushforward_current(const Flow& flow, const Current& t_current, double tau, double t) {
    return pushforward(t_current, flow.as_map(tau, t));
}

Current dual_lie_derivative(const Current& t_current, const VectorField& w) {
    Current base = t_current;
    VectorField vf = w;
    return Current(t_current.ambient_dim(), t_current.dimension(),
                   "dual-lie(" + t_current.provenance() + ")",
                   [base, vf](const DifferentialForm& omega) { return base(lie_derivative(vf, omega)); });
}

Current dual_lie_decomposed(const Current& t_current, const VectorField& w) {
    Current second = boundary(wedge_multivector(t_current, w));
    if (t_current.dimension() == 0) return second;
    Current first = wedge_multivector(boundary(t_current), w);
    return first + second;
}

double current_rate_fd(const Flow& flow, const Current& t_current, const DifferentialForm& omega,
                       double t, double dtau) {
    auto diff = [&](double h) {
        double plus = pushforward_current(flow, t_current, t + h, t)(omega);
        double minus = pushforward_current(flow, t_current, t - h, t)(omega);
        return (plus - minus) / (2.0 * h);
    };
    double d1 = diff(dtau);
    double d2 = diff(dtau / 2.0);
    return (4.0 * d2 - d1) / 3.0;  // Richardson on the O(h^2) central difference
}

}  // namespace defects
