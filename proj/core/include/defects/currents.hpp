#pragma once

#include <string>

#include "defects/battery.hpp"
#include "defects/chains.hpp"

namespace defects {

/// De Rham r-current: a linear functional on compactly supported degree-r
/// test forms. Immutable; evaluation is pure. The provenance tag names the
/// constructor chain for reports.
class Current {
public:
    Current() = default;
    Current(int n, int dimension, std::string provenance,
            std::function<double(const DifferentialForm&)> eval);

    int ambient_dim() const { return n_; }
    /// The current acts on test forms of this degree.
    int dimension() const { return r_; }
    const std::string& provenance() const { return provenance_; }

    double operator()(const DifferentialForm& omega) const;

    friend Current operator+(const Current& a, const Current& b);
    friend Current operator*(const Current& a, double s);
    friend Current operator*(double s, const Current& a) { return a * s; }

private:
    int n_ = 0;
    int r_ = 0;
    std::string provenance_;
    std::function<double(const DifferentialForm&)> eval_;
};

/// T_phi(omega) = integral of phi ^ omega over an n-dimensional domain chain;
/// deg phi = n - r. Test-form supports must lie inside the domain's bounding
/// box.
Current current_from_form(const DifferentialForm& phi, const Chain& domain);

/// T_S(omega) = integral of omega over the r-chain.
Current current_from_chain(const Chain& c);

/// Dirac 0-current at a point.
Current dirac(const Vec& x);

/// Boundary: (boundary T)(psi) = T(d psi); rejected for 0-currents.
Current boundary(const Current& t);

/// (T ^ V)(omega) = T(V . omega) for a degree-m multivector field V.
Current wedge_multivector(const Current& t, const MultivectorField& mv);
Current wedge_multivector(const Current& t, const VectorField& w);

/// (T L alpha)(omega) = T(alpha ^ omega) for a smooth degree-m form, m <= r.
Current contract_form(const Current& t, const DifferentialForm& alpha);

/// Pushforward under a diffeomorphism: (f_* T)(omega) = T(f* omega).
Current pushforward(const Current& t, const MapBetweenCharts& f);

// --- singular boundary evaluation ------------------------------------------------

struct ExcisionSpec {
    enum class Kind { AxisLineZ, Point };
    Kind kind = Kind::AxisLineZ;
    Vec point;           // for Kind::Point
    double eps0 = 0.2;   // tube radii eps_k = eps0 * 2^{-k}
    int levels = 5;      // k = 0 .. levels-1 (at least 4 so the fit has slack)
    /// z-range for the tube cells (line kind); defaults to the test-form span.
    double z_lo = -1.0, z_hi = 1.0;
    QuadSpec tube_quad{16, 8};

    std::vector<double> radii() const;
};

struct ExtrapolationResult {
    double value = 0.0;           // extrapolated eps -> 0 value
    double slope = 0.0;           // fitted linear coefficient
    double fit_residual = 0.0;    // max |fit - sample| over the fitted radii
    std::vector<std::pair<double, double>> samples;  // (eps, tube integral)
};

/// Boundary of the singular-form current T_phi evaluated on one test form by
/// tube excision: integrates the restriction of phi ^ psi over the tube
/// boundary for each radius and Richardson-extrapolates (linear fit on the
/// last three radii). Requires d phi = 0 on the excised region.
ExtrapolationResult singular_boundary_eval(const DifferentialForm& phi, const ExcisionSpec& spec,
                                           const DifferentialForm& psi);

/// The boundary current of T_phi packaged as a Current via the excision
/// evaluator (dimension n - deg phi - 1).
Current excision_boundary_current(const DifferentialForm& phi, const ExcisionSpec& spec);

// --- Frank rules -------------------------------------------------------------------

/// max |(boundary boundary T)(omega)| over the battery (degree r-2); currents
/// of dimension < 2 have identically vanishing second boundary.
double frank_rule_residual(const Current& t, const Battery& battery);

struct FrankExampleRow {
    double lhs = 0.0;  // boundary R evaluated on a test form
    double rhs = 0.0;  // minus the boundary integral of du ^ alpha
    double abs_err = 0.0;
};

struct FrankExampleResult {
    Current r_current;
    std::vector<FrankExampleRow> rows;
    double max_abs_err = 0.0;
};

/// R(psi) = integral over boundary S of u psi; checks boundary R(alpha) against
/// -integral_{boundary S} du ^ alpha on the battery.
FrankExampleResult frank_dislocation_example(const ScalarField& u, const Chain& s,
                                             const Battery& battery);

/// Decomposability probe for currents: max |(T L psi)(omega)| over the battery
/// for each probe 1-form psi; a decomposable current annihilates every psi in
/// its cotangent distribution.
double decomposability_probe(const Current& t, const std::vector<DifferentialForm>& probes,
                             const Battery& battery);

}  // namespace defects
