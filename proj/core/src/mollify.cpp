#include "defects/mollify.hpp"

#include <cmath>
#include <stdexcept>

namespace defects {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kClamp = 1e-12;

double bump_profile(double s2) {
    if (s2 > 1.0 - kClamp) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s2));
}

double bump_profile_deriv_s2(double s2) {
    // d/d(s^2) of the profile
    if (s2 > 1.0 - kClamp) return 0.0;
    double om = 1.0 - s2;
    return -bump_profile(s2) / (om * om);
}

double sphere_surface(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return 2.0 * kPi;
        case 3: return 4.0 * kPi;
        case 4: return 2.0 * kPi * kPi;
        default: throw std::invalid_argument("sphere_surface: n must be 1..4");
    }
}

/// Composite Gauss-Legendre of f over [0,1].
double radial_integral(const std::function<double(double)>& f, int q, int m) {
    const auto& [nodes, weights] = gauss_legendre(q);
    double acc = 0.0;
    for (int p = 0; p < m; ++p)
        for (std::size_t i = 0; i < nodes.size(); ++i)
            acc += weights[i] / m * f((p + nodes[i]) / m);
    return acc;
}

}  // namespace

Mollifier::Mollifier(int n, double eps, int radial_q) : n_(n), eps_(eps) {
    if (eps <= 0) throw std::invalid_argument("Mollifier: eps must be positive");
    double moment = radial_integral(
        [n](double s) { return bump_profile(s * s) * std::pow(s, n - 1); }, radial_q, 16);
    double c_n = sphere_surface(n) * moment;
    norm_ = 1.0 / (c_n * std::pow(eps, n));
}

double Mollifier::value(const Vec& v) const {
    double s2 = v.squaredNorm() / (eps_ * eps_);
    return norm_ * bump_profile(s2);
}

Vec Mollifier::gradient(const Vec& v) const {
    double s2 = v.squaredNorm() / (eps_ * eps_);
    if (s2 > 1.0 - kClamp) return Vec::Zero(n_);
    return norm_ * bump_profile_deriv_s2(s2) * (2.0 / (eps_ * eps_)) * v;
}

double Mollifier::mass(QuadSpec quad) const {
    // independent Cartesian quadrature over the support box
    const auto& [nodes, weights] = gauss_legendre(quad.q);
    const double w = 2.0 * eps_;
    double acc = 0.0;
    std::vector<int> panel(static_cast<std::size_t>(n_), 0);
    std::vector<int> node(static_cast<std::size_t>(n_), 0);
    std::function<void(int, double, Vec&)> walk = [&](int axis, double weight, Vec& x) {
        if (axis == n_) {
            acc += weight * value(x);
            return;
        }
        for (int p = 0; p < quad.m; ++p)
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                x[axis] = -eps_ + w * (p + nodes[i]) / quad.m;
                walk(axis + 1, weight * weights[i] * w / quad.m, x);
            }
    };
    Vec x(n_);
    walk(0, 1.0, x);
    return acc;
}

std::vector<double> MollifierSpec::schedule() const {
    std::vector<double> out;
    double e = eps0;
    for (int k = 0; k < levels; ++k) {
        out.push_back(e);
        e *= 0.5;
    }
    return out;
}

// --- chain densities ---------------------------------------------------------------

namespace {

/// Precomputed quadrature panels of one cell, windowed against the kernel
/// support during density evaluation.
struct CellPanels {
    struct Panel {
        Vec center;     // image of the panel midpoint
        double radius;  // covering radius of the panel image
        std::vector<Vec> points;      // image points
        std::vector<double> weights;  // quadrature weights (include 1/M^r)
        std::vector<Vec> minors;      // per point: minor_mu(J) for all |mu| = r
    };
    std::vector<Panel> panels;
    int minor_count = 0;
};

CellPanels build_panels(const Cell& cell, double eps, const QuadSpec& quad) {
    const int r = cell.r();
    const int n = cell.n();
    CellPanels out;
    const auto& rows = index_set(n, r);
    out.minor_count = static_cast<int>(rows.size());

    if (r == 0) {
        CellPanels::Panel p;
        p.center = cell.map(Vec(0));
        p.radius = 0.0;
        p.points.push_back(p.center);
        p.weights.push_back(double(cell.orientation));
        p.minors.push_back(Vec::Ones(1));
        out.panels.push_back(std::move(p));
        return out;
    }

    // Per-axis subdivision so image panels are finer than the kernel radius.
    std::vector<int> subdiv(static_cast<std::size_t>(r), 1);
    for (int axis = 0; axis < r; ++axis) {
        // crude arc length along this axis through the cell center
        Vec u = Vec::Constant(r, 0.5);
        double len = 0.0;
        const int probes = 16;
        Vec prev = Vec();
        for (int s = 0; s <= probes; ++s) {
            u[axis] = double(s) / probes;
            Vec x = cell.map(u);
            if (s > 0) len += (x - prev).norm();
            prev = x;
        }
        int m = static_cast<int>(std::ceil(len / (0.5 * eps)));
        subdiv[static_cast<std::size_t>(axis)] = std::min(std::max(m, 1), 4096);
    }

    const auto& [nodes, weights] = gauss_legendre(quad.q);
    std::vector<int> pidx(static_cast<std::size_t>(r), 0);
    std::function<void(int)> walk = [&](int axis) {
        if (axis == r) {
            CellPanels::Panel panel;
            Vec mid(r);
            for (int i = 0; i < r; ++i)
                mid[i] = (pidx[static_cast<std::size_t>(i)] + 0.5) / subdiv[static_cast<std::size_t>(i)];
            panel.center = cell.map(mid);
            panel.radius = 0.0;

            std::vector<int> nidx(static_cast<std::size_t>(r), 0);
            std::function<void(int, double)> nwalk = [&](int naxis, double w) {
                if (naxis == r) {
                    Vec u(r);
                    for (int i = 0; i < r; ++i)
                        u[i] = (pidx[static_cast<std::size_t>(i)] +
                                nodes[static_cast<std::size_t>(nidx[static_cast<std::size_t>(i)])]) /
                               subdiv[static_cast<std::size_t>(i)];
                    Vec x = cell.map(u);
                    Mat j = cell.map.jacobian(u);
                    Vec minors(out.minor_count);
                    for (int mi = 0; mi < out.minor_count; ++mi) {
                        Mat sub(r, r);
                        for (int a = 0; a < r; ++a)
                            for (int b = 0; b < r; ++b) sub(a, b) = j(rows[static_cast<std::size_t>(mi)][a] - 1, b);
                        minors[mi] = sub.determinant();
                    }
                    panel.points.push_back(x);
                    panel.weights.push_back(w * cell.orientation);
                    panel.minors.push_back(minors);
                    panel.radius = std::max(panel.radius, (x - panel.center).norm());
                    return;
                }
                for (std::size_t k = 0; k < nodes.size(); ++k) {
                    nidx[static_cast<std::size_t>(naxis)] = static_cast<int>(k);
                    nwalk(naxis + 1, w * weights[k] / subdiv[static_cast<std::size_t>(naxis)]);
                }
            };
            nwalk(0, 1.0);
            out.panels.push_back(std::move(panel));
            return;
        }
        for (int s = 0; s < subdiv[static_cast<std::size_t>(axis)]; ++s) {
            pidx[static_cast<std::size_t>(axis)] = s;
            walk(axis + 1);
        }
    };
    walk(0);
    return out;
}

struct DensityField {
    std::shared_ptr<std::vector<std::pair<CellPanels, int>>> cells;  // panels + multiplicity
    std::shared_ptr<Mollifier> kernel;
    int minor_index = 0;

    double value(const Vec& x) const {
        double acc = 0.0;
        const double reach = kernel->eps();
        for (const auto& [panels, mult] : *cells) {
            for (const auto& p : panels.panels) {
                if ((x - p.center).norm() > reach + p.radius) continue;
                for (std::size_t i = 0; i < p.points.size(); ++i) {
                    double k = kernel->value(x - p.points[i]);
                    if (k == 0.0) continue;
                    acc += mult * p.weights[i] * p.minors[i][minor_index] * k;
                }
            }
        }
        return acc;
    }
    Vec grad(const Vec& x) const {
        Vec acc = Vec::Zero(x.size());
        const double reach = kernel->eps();
        for (const auto& [panels, mult] : *cells) {
            for (const auto& p : panels.panels) {
                if ((x - p.center).norm() > reach + p.radius) continue;
                for (std::size_t i = 0; i < p.points.size(); ++i)
                    acc += mult * p.weights[i] * p.minors[i][minor_index] *
                           kernel->gradient(x - p.points[i]);
            }
        }
        return acc;
    }
};

/// Integration chain over the eps-fattened chain image, restricted to the
/// support of the paired test form and refined near the tube so the kernel
/// scale is resolved.
Chain tube_integration_chain(const Box& tube, const SupportBall& support, double eps,
                             const QuadSpec& quad) {
    const int n = tube.dim();
    Box window;
    window.lo = Vec(n);
    window.hi = Vec(n);
    for (int i = 0; i < n; ++i) {
        window.lo[i] = std::max(tube.lo[i], support.center[i] - support.radius - 0.02);
        window.hi[i] = std::min(tube.hi[i], support.center[i] + support.radius + 0.02);
        if (window.lo[i] >= window.hi[i]) return Chain();  // disjoint
    }
    Chain out;
    Cell cell = box_cell(window, quad);
    // per-axis subdivisions: resolve min(kernel scale, window extent)
    // via quad.m scaled panels; box_cell uses a single QuadSpec, so choose m
    // from the worst axis ratio, capped to keep the cost bounded.
    int m = quad.m;
    for (int i = 0; i < n; ++i) {
        double extent = window.extent(i);
        int need = static_cast<int>(std::ceil(extent / (0.75 * eps)));
        m = std::max(m, std::min(need, 24));
    }
    cell.quad.m = m;
    out.add(cell);
    return out;
}

}  // namespace

MollifiedCurrent mollify_chain_current(const Chain& c, const MollifierSpec& spec, double eps,
                                       const Box& scenario_box) {
    const int n = c.n();
    const int r = c.r();
    Box image = c.bounding_box();
    if (!scenario_box.contains_box(image.padded(eps)))
        throw std::invalid_argument(
            "mollify_chain_current: chain must sit inside the scenario box with margin > eps");

    auto kernel = std::make_shared<Mollifier>(n, eps, spec.radial_q);
    auto panels = std::make_shared<std::vector<std::pair<CellPanels, int>>>();
    for (const auto& [cell, mult] : c.cells)
        panels->emplace_back(build_panels(cell, eps, spec.density_quad), mult);

    MollifiedCurrent out;
    out.tube = image.padded(eps);

    DifferentialForm phi(n, n - r, scenario_box);
    const auto& nu_set = index_set(n, n - r);
    for (std::size_t nu_pos = 0; nu_pos < nu_set.size(); ++nu_pos) {
        const MultiIndex& nu = nu_set[nu_pos];
        MultiIndex mu = nu.complement(n);
        MergeResult mg = merge_indices(nu, mu);
        if (mg.degenerate) throw std::logic_error("mollify: complement merge degenerate");
        DensityField density{panels, kernel, index_position(n, mu)};
        double sgn = mg.sign;
        phi.set_coeff(nu, ScalarField::from_function(
                              n, [density, sgn](const Vec& x) { return sgn * density.value(x); },
                              [density, sgn](const Vec& x) { return Vec(sgn * density.grad(x)); }));
    }
    out.form = phi;

    Box tube = out.tube;
    QuadSpec tq = spec.tube_quad;
    double eps_copy = eps;
    out.current = Current(n, r, "mollified-chain", [phi, tube, tq, eps_copy](const DifferentialForm& omega) {
        if (!omega.support())
            throw std::invalid_argument("mollified current: test form carries no support bound");
        Chain dom = tube_integration_chain(tube, *omega.support(), eps_copy, tq);
        if (dom.empty()) return 0.0;
        return integrate(wedge(phi, omega), dom);
    });
    return out;
}

double boundary_commutation_residual(const Chain& c, const MollifierSpec& spec, double eps,
                                     const DifferentialForm& psi, const Box& scenario_box) {
    MollifiedCurrent smooth = mollify_chain_current(c, spec, eps, scenario_box);
    double lhs = smooth.current(psi.exterior_derivative().with_support(*psi.support()));

    MollifiedCurrent smooth_boundary =
        mollify_chain_current(boundary_chain(c), spec, eps, scenario_box);
    double rhs = smooth_boundary.current(psi);
    return std::abs(lhs - rhs);
}

std::vector<CoalescenceStep> coalescence_schedule(const Chain& c, const MollifierSpec& spec,
                                                  int steps, const Battery& battery,
                                                  const Box& scenario_box) {
    Current singular = current_from_chain(c);
    std::vector<CoalescenceStep> out;
    double eps = spec.eps0;
    for (int k = 0; k <= steps; ++k) {
        MollifiedCurrent smooth = mollify_chain_current(c, spec, eps, scenario_box);
        CoalescenceStep step;
        step.eps = eps;
        step.t = 1.0 - eps;
        for (const auto& omega : battery.forms)
            step.weak_distance = std::max(step.weak_distance,
                                          std::abs(smooth.current(omega) - singular(omega)));
        out.push_back(step);
        eps *= 0.5;
    }
    return out;
}

}  // namespace defects
