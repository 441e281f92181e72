#include "defects/currents.hpp"

#include <cmath>
#include <stdexcept>

namespace defects {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Current::Current(int n, int dimension, std::string provenance,
                 std::function<double(const DifferentialForm&)> eval)
    : n_(n), r_(dimension), provenance_(std::move(provenance)), eval_(std::move(eval)) {
    if (dimension < 0 || dimension > n) throw std::invalid_argument("Current: bad dimension");
}

double Current::operator()(const DifferentialForm& omega) const {
    if (!eval_) throw std::runtime_error("Current: empty");
    if (omega.dim() != n_)
        throw std::invalid_argument("Current: ambient dimension mismatch");
    if (omega.degree() != r_)
        throw std::invalid_argument("Current: test form has degree " + std::to_string(omega.degree()) +
                                    ", expected " + std::to_string(r_));
    return eval_(omega);
}

Current operator+(const Current& a, const Current& b) {
    if (a.n_ != b.n_ || a.r_ != b.r_) throw std::invalid_argument("Current sum: shape mismatch");
    auto ea = a.eval_, eb = b.eval_;
    return Current(a.n_, a.r_, "(" + a.provenance_ + " + " + b.provenance_ + ")",
                   [ea, eb](const DifferentialForm& w) { return ea(w) + eb(w); });
}

Current operator*(const Current& a, double s) {
    auto ea = a.eval_;
    return Current(a.n_, a.r_, a.provenance_,
                   [ea, s](const DifferentialForm& w) { return s * ea(w); });
}

Current current_from_form(const DifferentialForm& phi, const Chain& domain) {
    if (domain.r() != phi.dim())
        throw std::invalid_argument("current_from_form: domain chain must be n-dimensional");
    const int n = phi.dim();
    const int r = n - phi.degree();
    if (r < 0) throw std::invalid_argument("current_from_form: deg phi exceeds n");
    Box bbox = domain.bounding_box();
    DifferentialForm f = phi;
    Chain dom = domain;
    return Current(n, r, "form", [f, dom, bbox, n](const DifferentialForm& omega) {
        if (!omega.support())
            throw std::invalid_argument("current_from_form: test form carries no support bound");
        const auto& ball = *omega.support();
        for (int i = 0; i < n; ++i) {
            if (ball.center[i] - ball.radius < bbox.lo[i] - 1e-9 ||
                ball.center[i] + ball.radius > bbox.hi[i] + 1e-9)
                throw std::invalid_argument("current_from_form: test-form support escapes the domain");
        }
        return integrate(wedge(f, omega), dom);
    });
}

Current current_from_chain(const Chain& c) {
    Chain cc = c;
    return Current(c.n(), c.r(), "chain",
                   [cc](const DifferentialForm& omega) { return integrate(omega, cc); });
}

Current dirac(const Vec& x) {
    Vec p = x;
    return Current(static_cast<int>(x.size()), 0, "dirac",
                   [p](const DifferentialForm& omega) { return omega(p).raw(0); });
}

Current boundary(const Current& t) {
    if (t.dimension() == 0)
        throw std::invalid_argument("boundary: 0-currents have no boundary");
    Current base = t;
    return Current(t.ambient_dim(), t.dimension() - 1, "boundary(" + t.provenance() + ")",
                   [base](const DifferentialForm& psi) { return base(psi.exterior_derivative()); });
}

Current wedge_multivector(const Current& t, const MultivectorField& mv) {
    const int m = mv.degree();
    if (t.dimension() + m > t.ambient_dim())
        throw std::invalid_argument("wedge_multivector: degree overflow");
    Current base = t;
    MultivectorField v = mv;
    return Current(t.ambient_dim(), t.dimension() + m, "(" + t.provenance() + " ^ mv)",
                   [base, v](const DifferentialForm& omega) { return base(contract(v, omega)); });
}

Current wedge_multivector(const Current& t, const VectorField& w) {
    return wedge_multivector(t, MultivectorField::from_vector_field(w));
}

Current contract_form(const Current& t, const DifferentialForm& alpha) {
    const int m = alpha.degree();
    if (m > t.dimension()) throw std::invalid_argument("contract_form: degree underflow");
    Current base = t;
    DifferentialForm a = alpha;
    return Current(t.ambient_dim(), t.dimension() - m, "(" + t.provenance() + " L form)",
                   [base, a](const DifferentialForm& omega) { return base(wedge(a, omega)); });
}

Current pushforward(const Current& t, const MapBetweenCharts& f) {
    Current base = t;
    MapBetweenCharts map = f;
    return Current(t.ambient_dim(), t.dimension(), "push(" + t.provenance() + ")",
                   [base, map](const DifferentialForm& omega) { return base(pullback(map, omega)); });
}

// --- excision ---------------------------------------------------------------------

std::vector<double> ExcisionSpec::radii() const {
    if (levels < 4) throw std::invalid_argument("ExcisionSpec: need at least 4 radii");
    std::vector<double> out;
    double e = eps0;
    for (int k = 0; k < levels; ++k) {
        out.push_back(e);
        e *= 0.5;
    }
    return out;  // strictly decreasing by construction
}

namespace {

/// Linear fit v(eps) = v0 + c eps over the last three radii.
ExtrapolationResult fit_linear_tail(std::vector<std::pair<double, double>> samples) {
    ExtrapolationResult out;
    out.samples = samples;
    const std::size_t n = samples.size();
    if (n < 3) throw std::invalid_argument("extrapolation: need at least 3 samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = n - 3; i < n; ++i) {
        sx += samples[i].first;
        sy += samples[i].second;
        sxx += samples[i].first * samples[i].first;
        sxy += samples[i].first * samples[i].second;
    }
    double det = 3 * sxx - sx * sx;
    out.slope = (3 * sxy - sx * sy) / det;
    out.value = (sy - out.slope * sx) / 3.0;
    for (std::size_t i = n - 3; i < n; ++i) {
        double fit = out.value + out.slope * samples[i].first;
        out.fit_residual = std::max(out.fit_residual, std::abs(fit - samples[i].second));
    }
    return out;
}

void require_closed_on_excised(const DifferentialForm& phi, const ExcisionSpec& spec) {
    DifferentialForm dphi = phi.exterior_derivative();
    std::vector<Vec> probes;
    if (spec.kind == ExcisionSpec::Kind::AxisLineZ) {
        for (double r : {1.5 * spec.eps0, 3.0 * spec.eps0})
            for (double th : {0.4, 2.1, 4.0})
                for (double z : {spec.z_lo * 0.9, 0.5 * (spec.z_lo + spec.z_hi), spec.z_hi * 0.9}) {
                    Vec x(3);
                    x << r * std::cos(th), r * std::sin(th), z;
                    probes.push_back(x);
                }
    } else {
        for (double r : {1.5 * spec.eps0, 3.0 * spec.eps0})
            for (double th : {0.4, 2.1})
                for (double ph : {0.3, 1.2, 2.6}) {
                    Vec x(3);
                    x << spec.point[0] + r * std::sin(ph) * std::cos(th),
                        spec.point[1] + r * std::sin(ph) * std::sin(th), spec.point[2] + r * std::cos(ph);
                    probes.push_back(x);
                }
    }
    for (const auto& x : probes) {
        if (!phi.domain().contains(x)) continue;
        double scale = std::max(1.0, phi(x).max_abs_coeff());
        if (dphi(x).max_abs_coeff() > 1e-9 * scale)
            throw std::invalid_argument("singular_boundary_eval: phi is not closed on the excised region");
    }
}

}  // namespace

ExtrapolationResult singular_boundary_eval(const DifferentialForm& phi, const ExcisionSpec& spec,
                                           const DifferentialForm& psi) {
    const int n = phi.dim();
    if (n != 3) throw std::invalid_argument("singular_boundary_eval: implemented for n = 3");
    const int p = phi.degree();
    if (p + psi.degree() != n - 1)
        throw std::invalid_argument("singular_boundary_eval: phi ^ psi must have degree n - 1");
    require_closed_on_excised(phi, spec);

    // Restriction of phi ^ psi to the tube boundary, oriented by the natural
    // (theta, z) / (polar, azimuth) parametrization. Stokes on the excised
    // domain D_eps gives T_phi(d psi) = (-1)^p int_{D_eps} d(phi ^ psi) with
    // the tube carrying the inner-boundary orientation, i.e. minus the
    // parametrization orientation; the two signs combine to (-1)^{p+1}.
    const double sign = (p % 2 == 0) ? -1.0 : 1.0;

    double z_lo = spec.z_lo, z_hi = spec.z_hi;
    if (psi.support()) {
        const auto& ball = *psi.support();
        if (n == 3 && spec.kind == ExcisionSpec::Kind::AxisLineZ) {
            z_lo = std::max(z_lo, ball.center[2] - ball.radius - 0.05);
            z_hi = std::min(z_hi, ball.center[2] + ball.radius + 0.05);
        }
    }

    DifferentialForm integrand = wedge(phi, psi);
    std::vector<std::pair<double, double>> samples;
    for (double eps : spec.radii()) {
        Chain tube;
        if (spec.kind == ExcisionSpec::Kind::AxisLineZ) {
            tube = Chain(cylinder_shell_cell(eps, z_lo, z_hi, spec.tube_quad));
        } else {
            tube = Chain(sphere_shell_cell(spec.point, eps, spec.tube_quad));
        }
        samples.emplace_back(eps, sign * integrate(integrand, tube));
    }
    return fit_linear_tail(std::move(samples));
}

Current excision_boundary_current(const DifferentialForm& phi, const ExcisionSpec& spec) {
    const int n = phi.dim();
    const int r = n - phi.degree();  // dimension of T_phi
    DifferentialForm f = phi;
    ExcisionSpec s = spec;
    return Current(n, r - 1, "excision-boundary",
                   [f, s](const DifferentialForm& psi) { return singular_boundary_eval(f, s, psi).value; });
}

// --- Frank rules --------------------------------------------------------------------

double frank_rule_residual(const Current& t, const Battery& battery) {
    if (t.dimension() < 2) return 0.0;
    Current dd = boundary(boundary(t));
    double worst = 0.0;
    for (const auto& omega : battery.forms) worst = std::max(worst, std::abs(dd(omega)));
    return worst;
}

FrankExampleResult frank_dislocation_example(const ScalarField& u, const Chain& s,
                                             const Battery& battery) {
    Chain edge = boundary_chain(s);
    const int n = s.n();

    // R(psi) = integral over boundary S of u psi = (T_{boundary S} L u)(psi)
    DifferentialForm u_form(n, 0, s.bounding_box().padded(1.0));
    u_form.set_coeff(MultiIndex{}, u);
    Current r_current = contract_form(current_from_chain(edge), u_form);

    // du as a 1-form
    DifferentialForm du(n, 1, u_form.domain());
    for (int i = 1; i <= n; ++i) du.set_coeff(MultiIndex{i}, u.partial(i - 1));

    FrankExampleResult out;
    out.r_current = r_current;
    Current bdry_r = boundary(r_current);
    for (const auto& alpha : battery.forms) {
        FrankExampleRow row;
        row.lhs = bdry_r(alpha);
        row.rhs = -integrate(wedge(du, alpha), edge);
        row.abs_err = std::abs(row.lhs - row.rhs);
        out.rows.push_back(row);
        out.max_abs_err = std::max(out.max_abs_err, row.abs_err);
    }
    return out;
}

double decomposability_probe(const Current& t, const std::vector<DifferentialForm>& probes,
                             const Battery& battery) {
    double worst = 0.0;
    for (const auto& psi : probes) {
        Current contracted = contract_form(t, psi);
        for (const auto& omega : battery.forms)
            worst = std::max(worst, std::abs(contracted(omega)));
    }
    return worst;
}

}  // namespace defects
