#include "defects/chains.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

namespace defects {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int q) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
    if (q < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");

    // Newton iteration on Legendre polynomials, then shift [-1,1] -> [0,1].
    std::vector<double> nodes(static_cast<std::size_t>(q)), weights(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (q + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= q; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = q * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= q; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = q * (x * p1 - p0) / (x * x - 1.0);
        nodes[static_cast<std::size_t>(q - 1 - i)] = 0.5 * (x + 1.0);
        weights[static_cast<std::size_t>(q - 1 - i)] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    auto [pos, ok] = cache.emplace(q, std::make_pair(std::move(nodes), std::move(weights)));
    (void)ok;
    return pos->second;
}

// --- CellMap -------------------------------------------------------------------

CellMap::CellMap(int n, int r, std::function<Vec(const Vec&)> eval,
                 std::function<Mat(const Vec&)> jacobian)
    : n_(n), r_(r), eval_(std::move(eval)), jacobian_(std::move(jacobian)) {}

CellMap CellMap::affine(const Vec& origin, const Mat& span) {
    const int n = static_cast<int>(origin.size());
    const int r = static_cast<int>(span.cols());
    return CellMap(
        n, r, [origin, span](const Vec& u) { return Vec(origin + span * u); },
        [span](const Vec&) { return span; });
}

CellMap CellMap::circle(const Vec& center, double radius, double z) {
    auto eval = [center, radius, z](const Vec& u) {
        double t = 2 * kPi * u[0];
        Vec x(3);
        x << center[0] + radius * std::cos(t), center[1] + radius * std::sin(t), z;
        return x;
    };
    auto jac = [radius](const Vec& u) {
        double t = 2 * kPi * u[0];
        Mat j(3, 1);
        j << -2 * kPi * radius * std::sin(t), 2 * kPi * radius * std::cos(t), 0.0;
        return j;
    };
    return CellMap(3, 1, eval, jac);
}

CellMap CellMap::cylinder_shell(double radius, double z0, double z1) {
    auto eval = [radius, z0, z1](const Vec& u) {
        double t = 2 * kPi * u[0];
        Vec x(3);
        x << radius * std::cos(t), radius * std::sin(t), z0 + (z1 - z0) * u[1];
        return x;
    };
    auto jac = [radius, z0, z1](const Vec& u) {
        double t = 2 * kPi * u[0];
        Mat j(3, 2);
        j << -2 * kPi * radius * std::sin(t), 0.0,  //
            2 * kPi * radius * std::cos(t), 0.0,    //
            0.0, (z1 - z0);
        return j;
    };
    return CellMap(3, 2, eval, jac);
}

CellMap CellMap::annulus(double r0, double r1, double z) {
    auto eval = [r0, r1, z](const Vec& u) {
        double r = r0 + (r1 - r0) * u[0];
        double t = 2 * kPi * u[1];
        Vec x(3);
        x << r * std::cos(t), r * std::sin(t), z;
        return x;
    };
    auto jac = [r0, r1](const Vec& u) {
        double r = r0 + (r1 - r0) * u[0];
        double t = 2 * kPi * u[1];
        Mat j(3, 2);
        j << (r1 - r0) * std::cos(t), -2 * kPi * r * std::sin(t),  //
            (r1 - r0) * std::sin(t), 2 * kPi * r * std::cos(t),    //
            0.0, 0.0;
        return j;
    };
    return CellMap(3, 2, eval, jac);
}

CellMap CellMap::cylindrical_box(double r0, double r1, double t0, double t1, double z0, double z1) {
    auto eval = [=](const Vec& u) {
        double r = r0 + (r1 - r0) * u[0];
        double t = t0 + (t1 - t0) * u[1];
        Vec x(3);
        x << r * std::cos(t), r * std::sin(t), z0 + (z1 - z0) * u[2];
        return x;
    };
    auto jac = [=](const Vec& u) {
        double r = r0 + (r1 - r0) * u[0];
        double t = t0 + (t1 - t0) * u[1];
        Mat j(3, 3);
        j << (r1 - r0) * std::cos(t), -(t1 - t0) * r * std::sin(t), 0.0,  //
            (r1 - r0) * std::sin(t), (t1 - t0) * r * std::cos(t), 0.0,    //
            0.0, 0.0, (z1 - z0);
        return j;
    };
    return CellMap(3, 3, eval, jac);
}

CellMap CellMap::sphere_shell(const Vec& center, double radius) {
    return spherical_cap(center, radius, kPi);
}

CellMap CellMap::spherical_cap(const Vec& center, double radius, double opening) {
    auto eval = [center, radius, opening](const Vec& u) {
        double a = opening * u[0];   // polar angle
        double b = 2 * kPi * u[1];   // azimuth
        Vec x(3);
        x << center[0] + radius * std::sin(a) * std::cos(b),
            center[1] + radius * std::sin(a) * std::sin(b), center[2] + radius * std::cos(a);
        return x;
    };
    auto jac = [radius, opening](const Vec& u) {
        double a = opening * u[0];
        double b = 2 * kPi * u[1];
        Mat j(3, 2);
        j << opening * radius * std::cos(a) * std::cos(b), -2 * kPi * radius * std::sin(a) * std::sin(b),
            opening * radius * std::cos(a) * std::sin(b), 2 * kPi * radius * std::sin(a) * std::cos(b),
            -opening * radius * std::sin(a), 0.0;
        return j;
    };
    return CellMap(3, 2, eval, jac);
}

CellMap CellMap::face(const CellMap& base, int axis, int side) {
    const int r = base.param_dim();
    if (axis < 0 || axis >= r) throw std::invalid_argument("CellMap::face: bad axis");
    auto inject = [axis, side, r](const Vec& u) {
        Vec full(r);
        int k = 0;
        for (int i = 0; i < r; ++i) full[i] = (i == axis) ? double(side) : u[k++];
        return full;
    };
    auto eval = [base, inject](const Vec& u) { return base(inject(u)); };
    auto jac = [base, inject, axis, r](const Vec& u) {
        Mat full = base.jacobian(inject(u));
        Mat out(full.rows(), r - 1);
        int k = 0;
        for (int i = 0; i < r; ++i)
            if (i != axis) out.col(k++) = full.col(i);
        return out;
    };
    return CellMap(base.ambient_dim(), r - 1, eval, jac);
}

// --- Cell / Chain ----------------------------------------------------------------

void Cell::validate(int fd_samples) const {
    const int rr = r();
    const auto& [nodes, weights] = gauss_legendre(quad.q);
    (void)weights;
    // immersion at quadrature nodes (first subdivision layer suffices)
    std::vector<int> idx(static_cast<std::size_t>(rr), 0);
    std::function<void(int)> walk = [&](int axis) {
        if (axis == rr) {
            Vec u(rr);
            for (int i = 0; i < rr; ++i)
                u[i] = (idx[static_cast<std::size_t>(i)] + 0.0) / quad.m +
                       nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)] % nodes.size())] / quad.m;
            Mat j = map.jacobian(u);
            Eigen::JacobiSVD<Mat> svd(j);
            if (svd.singularValues().minCoeff() < 1e-10)
                throw std::runtime_error("Cell::validate: Jacobian rank deficient at a quadrature node");
            return;
        }
        for (int s = 0; s < quad.m; ++s) {
            idx[static_cast<std::size_t>(axis)] = s;
            walk(axis + 1);
        }
    };
    if (rr > 0) walk(0);

    // FD agreement of the Jacobian at random interior parameters
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> u01(0.15, 0.85);
    const double h = 1e-6;
    for (int s = 0; s < fd_samples; ++s) {
        Vec u(rr);
        for (int i = 0; i < rr; ++i) u[i] = u01(gen);
        Mat j = map.jacobian(u);
        for (int c = 0; c < rr; ++c) {
            Vec up = u, dn = u;
            up[c] += h;
            dn[c] -= h;
            Vec fd = (map(up) - map(dn)) / (2 * h);
            if ((fd - j.col(c)).cwiseAbs().maxCoeff() > 1e-5 * (1.0 + j.cwiseAbs().maxCoeff()))
                throw std::runtime_error("Cell::validate: Jacobian disagrees with finite differences");
        }
    }
}

int Chain::r() const {
    if (cells.empty()) throw std::runtime_error("Chain::r: empty chain");
    return cells.front().first.r();
}

int Chain::n() const {
    if (cells.empty()) throw std::runtime_error("Chain::n: empty chain");
    return cells.front().first.n();
}

Box Chain::bounding_box() const {
    const int nn = n();
    Box box;
    box.lo = Vec::Constant(nn, std::numeric_limits<double>::infinity());
    box.hi = Vec::Constant(nn, -std::numeric_limits<double>::infinity());
    for (const auto& [cell, mult] : cells) {
        (void)mult;
        const int rr = cell.r();
        const int samples = 5;
        std::vector<int> idx(static_cast<std::size_t>(std::max(rr, 1)), 0);
        std::function<void(int)> walk = [&](int axis) {
            if (axis == rr) {
                Vec u(rr);
                for (int i = 0; i < rr; ++i)
                    u[i] = idx[static_cast<std::size_t>(i)] / double(samples - 1);
                Vec x = cell.map(u);
                box.lo = box.lo.cwiseMin(x);
                box.hi = box.hi.cwiseMax(x);
                return;
            }
            for (int s = 0; s < samples; ++s) {
                idx[static_cast<std::size_t>(axis)] = s;
                walk(axis + 1);
            }
        };
        if (rr == 0) {
            Vec x = cell.map(Vec(0));
            box.lo = box.lo.cwiseMin(x);
            box.hi = box.hi.cwiseMax(x);
        } else {
            walk(0);
        }
    }
    return box;
}

namespace {

double integrate_cell(const DifferentialForm& omega, const Cell& cell) {
    const int r = cell.r();
    const int n = cell.n();
    if (r == 0) {
        // 0-cell: the value of a 0-form at the image point
        return cell.orientation * omega(cell.map(Vec(0))).raw(0);
    }
    const auto& [nodes, weights] = gauss_legendre(cell.quad.q);
    const int q = cell.quad.q;
    const int m = cell.quad.m;
    const auto& rows = index_set(n, r);
    const double panel = 1.0 / m;

    double total = 0.0;
    std::vector<int> panel_idx(static_cast<std::size_t>(r), 0);
    std::vector<int> node_idx(static_cast<std::size_t>(r), 0);

    std::function<void(int)> panels = [&](int axis) {
        if (axis == r) {
            std::function<void(int, double)> nodes_walk = [&](int naxis, double w) {
                if (naxis == r) {
                    Vec u(r);
                    for (int i = 0; i < r; ++i)
                        u[i] = (panel_idx[static_cast<std::size_t>(i)] +
                                nodes[static_cast<std::size_t>(node_idx[static_cast<std::size_t>(i)])]) *
                               panel;
                    Vec x = cell.map(u);
                    AlternatingTensor w_x = omega(x);
                    if (w_x.max_abs_coeff() == 0.0) return;
                    Mat j = cell.map.jacobian(u);
                    double val = 0.0;
                    for (std::size_t rr = 0; rr < rows.size(); ++rr) {
                        double c = w_x.raw(static_cast<int>(rr));
                        if (c == 0.0) continue;
                        Mat minor(r, r);
                        for (int a = 0; a < r; ++a)
                            for (int b = 0; b < r; ++b) minor(a, b) = j(rows[rr][a] - 1, b);
                        val += c * minor.determinant();
                    }
                    total += w * val;
                    return;
                }
                for (int k = 0; k < q; ++k) {
                    node_idx[static_cast<std::size_t>(naxis)] = k;
                    nodes_walk(naxis + 1, w * weights[static_cast<std::size_t>(k)] * panel);
                }
            };
            nodes_walk(0, 1.0);
            return;
        }
        for (int s = 0; s < m; ++s) {
            panel_idx[static_cast<std::size_t>(axis)] = s;
            panels(axis + 1);
        }
    };
    panels(0);
    return cell.orientation * total;
}

}  // namespace

double integrate(const DifferentialForm& omega, const Chain& chain) {
    if (chain.empty()) return 0.0;
    if (omega.degree() != chain.r())
        throw std::invalid_argument("integrate: form degree != chain dimension");
    if (omega.dim() != chain.n())
        throw std::invalid_argument("integrate: ambient dimension mismatch");
    double total = 0.0;
    for (const auto& [cell, mult] : chain.cells) total += mult * integrate_cell(omega, cell);
    return total;
}

Chain boundary_chain(const Chain& chain) {
    if (chain.empty()) return Chain();
    if (chain.r() < 1) throw std::invalid_argument("boundary_chain: 0-chains have no boundary");
    Chain out;
    for (const auto& [cell, mult] : chain.cells) {
        const int r = cell.r();
        for (int axis = 0; axis < r; ++axis) {
            if (cell.periodic.test(static_cast<std::size_t>(axis))) continue;
            for (int side = 0; side <= 1; ++side) {
                Cell face;
                face.map = CellMap::face(cell.map, axis, side);
                // cubical boundary sign (-1)^{i+side} with 1-based axis i
                int sgn = (((axis + 1) + side) % 2 == 0) ? 1 : -1;
                face.orientation = cell.orientation * sgn;
                face.quad = cell.quad;
                // periodic flags of surviving axes carry over
                int k = 0;
                for (int i = 0; i < r; ++i) {
                    if (i == axis) continue;
                    if (cell.periodic.test(static_cast<std::size_t>(i)))
                        face.periodic.set(static_cast<std::size_t>(k));
                    ++k;
                }
                out.add(std::move(face), mult);
            }
        }
    }
    return out;
}

double stokes_residual(const DifferentialForm& omega, const Chain& chain) {
    double lhs = integrate(omega, boundary_chain(chain));
    double rhs = integrate(omega.exterior_derivative(), chain);
    return std::abs(lhs - rhs);
}

// --- builders ---------------------------------------------------------------------

Cell box_cell(const Box& box, QuadSpec quad) {
    const int n = box.dim();
    Mat span = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) span(i, i) = box.extent(i);
    Cell c;
    c.map = CellMap::affine(box.lo, span);
    c.quad = quad;
    return c;
}

Cell rectangle_cell(const Vec& origin, const Vec& edge1, const Vec& edge2, QuadSpec quad) {
    Mat span(origin.size(), 2);
    span.col(0) = edge1;
    span.col(1) = edge2;
    Cell c;
    c.map = CellMap::affine(origin, span);
    c.quad = quad;
    return c;
}

Cell segment_cell(const Vec& a, const Vec& b, QuadSpec quad) {
    Mat span(a.size(), 1);
    span.col(0) = b - a;
    Cell c;
    c.map = CellMap::affine(a, span);
    c.quad = quad;
    return c;
}

Cell circle_cell(const Vec& center, double radius, double z, QuadSpec quad) {
    Cell c;
    c.map = CellMap::circle(center, radius, z);
    c.quad = quad;
    c.periodic.set(0);
    return c;
}

Cell cylinder_shell_cell(double radius, double z0, double z1, QuadSpec quad) {
    Cell c;
    c.map = CellMap::cylinder_shell(radius, z0, z1);
    c.quad = quad;
    c.periodic.set(0);  // theta
    return c;
}

Cell annulus_cell(double r0, double r1, double z, QuadSpec quad) {
    Cell c;
    c.map = CellMap::annulus(r0, r1, z);
    c.quad = quad;
    c.periodic.set(1);  // theta
    return c;
}

Cell cylindrical_box_cell(double r0, double r1, double z0, double z1, QuadSpec quad, double t0,
                          double t1) {
    Cell c;
    c.map = CellMap::cylindrical_box(r0, r1, t0, t1, z0, z1);
    c.quad = quad;
    if (std::abs((t1 - t0) - 2 * kPi) < 1e-14) c.periodic.set(1);
    return c;
}

Cell sphere_shell_cell(const Vec& center, double radius, QuadSpec quad) {
    Cell c;
    c.map = CellMap::sphere_shell(center, radius);
    c.quad = quad;
    c.periodic.set(1);  // azimuth
    return c;
}

Cell spherical_cap_cell(const Vec& center, double radius, double opening, QuadSpec quad) {
    Cell c;
    c.map = CellMap::spherical_cap(center, radius, opening);
    c.quad = quad;
    c.periodic.set(1);
    return c;
}

}  // namespace defects
