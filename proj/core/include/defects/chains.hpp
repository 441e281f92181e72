#pragma once

#include <bitset>
#include <memory>
#include <vector>

#include "defects/fields.hpp"

namespace defects {

/// Gauss-Legendre nodes/weights on [0,1]; cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int q);

struct QuadSpec {
    int q = 10;  // Gauss-Legendre order per axis
    int m = 4;   // uniform subdivisions per axis
};

/// Parametrization [0,1]^r -> R^n with an exact n x r Jacobian.
class CellMap {
public:
    CellMap() = default;
    CellMap(int n, int r, std::function<Vec(const Vec&)> eval, std::function<Mat(const Vec&)> jacobian);

    int ambient_dim() const { return n_; }
    int param_dim() const { return r_; }
    Vec operator()(const Vec& u) const { return eval_(u); }
    Mat jacobian(const Vec& u) const { return jacobian_(u); }

    /// Affine map u -> origin + sum_i u_i span_i.
    static CellMap affine(const Vec& origin, const Mat& span);
    /// Circle of given radius about (cx, cy) at height z (n = 3), periodic axis 0.
    static CellMap circle(const Vec& center, double radius, double z);
    /// Lateral cylinder shell r = radius, theta in [0, 2pi], z in [z0, z1]; axes (theta, z).
    static CellMap cylinder_shell(double radius, double z0, double z1);
    /// Annulus r in [r0, r1], theta in [0, 2pi] at height z; axes (r, theta).
    static CellMap annulus(double r0, double r1, double z);
    /// Cylindrical 3-cell (r, theta, z) in [r0,r1] x [t0,t1] x [z0,z1].
    static CellMap cylindrical_box(double r0, double r1, double t0, double t1, double z0, double z1);
    /// Spherical shell about a center: (polar, azimuth) at fixed radius, n = 3.
    static CellMap sphere_shell(const Vec& center, double radius);
    /// Spherical cap of given opening angle (0, pi]; axes (polar, azimuth).
    static CellMap spherical_cap(const Vec& center, double radius, double opening);
    /// Face of a map: parameter axis pinned to side (0/1), remaining axes kept in order.
    static CellMap face(const CellMap& base, int axis, int side);

private:
    int n_ = 0, r_ = 0;
    std::function<Vec(const Vec&)> eval_;
    std::function<Mat(const Vec&)> jacobian_;
};

/// Oriented parametrized patch with a quadrature spec. Periodic axes are
/// identified end-to-end and contribute no boundary faces.
struct Cell {
    CellMap map;
    int orientation = 1;
    QuadSpec quad;
    std::bitset<4> periodic;

    int n() const { return map.ambient_dim(); }
    int r() const { return map.param_dim(); }

    /// Immersion check: Jacobian rank r at all quadrature nodes (tol 1e-10)
    /// and finite-difference agreement of the Jacobian at random parameters.
    void validate(int fd_samples = 5) const;
};

struct Chain {
    std::vector<std::pair<Cell, int>> cells;  // (cell, integer multiplicity)

    Chain() = default;
    explicit Chain(Cell c, int multiplicity = 1) { cells.emplace_back(std::move(c), multiplicity); }
    Chain& add(Cell c, int multiplicity = 1) {
        cells.emplace_back(std::move(c), multiplicity);
        return *this;
    }

    int r() const;
    int n() const;
    bool empty() const { return cells.empty(); }

    /// Axis-aligned bounding box of the image (sampled at quadrature nodes).
    Box bounding_box() const;
};

/// Integral of a degree-r form over an r-chain by tensor Gauss-Legendre
/// quadrature of the pulled-back integrand.
double integrate(const DifferentialForm& omega, const Chain& chain);

/// Cubical boundary: for each cell 2r faces with signs (-1)^{i+side},
/// composed with the cell orientation; periodic axes contribute none.
Chain boundary_chain(const Chain& chain);

/// |int_{boundary c} omega - int_c d omega|.
double stokes_residual(const DifferentialForm& omega, const Chain& chain);

// Cell builders used by scenarios (boxes, half-planes, segments, circles,
// shells, annuli). All use the default quadrature unless overridden.
Cell box_cell(const Box& box, QuadSpec quad = {});
Cell rectangle_cell(const Vec& origin, const Vec& edge1, const Vec& edge2, QuadSpec quad = {});
Cell segment_cell(const Vec& a, const Vec& b, QuadSpec quad = {});
Cell circle_cell(const Vec& center, double radius, double z, QuadSpec quad = {});
Cell cylinder_shell_cell(double radius, double z0, double z1, QuadSpec quad = {});
Cell annulus_cell(double r0, double r1, double z, QuadSpec quad = {});
Cell cylindrical_box_cell(double r0, double r1, double z0, double z1, QuadSpec quad = {},
                          double t0 = 0.0, double t1 = 2 * 3.14159265358979323846);
Cell sphere_shell_cell(const Vec& center, double radius, QuadSpec quad = {});
Cell spherical_cap_cell(const Vec& center, double radius, double opening, QuadSpec quad = {});

}  // namespace defects
