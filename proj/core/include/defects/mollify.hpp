#pragma once

#include "defects/currents.hpp"

namespace defects {

/// Radial bump kernel of radius eps, numerically normalized to unit mass.
/// The same bump family as the test forms; support is the closed eps-ball.
class Mollifier {
public:
    Mollifier(int n, double eps, int radial_q = 16);

    int dim() const { return n_; }
    double eps() const { return eps_; }
    double value(const Vec& v) const;
    Vec gradient(const Vec& v) const;

    /// Unit-mass check by independent Cartesian quadrature over the support box.
    double mass(QuadSpec quad = {16, 4}) const;

private:
    int n_;
    double eps_;
    double norm_;  // 1 / (c_n eps^n)
};

struct MollifierSpec {
    double eps0 = 1.0;
    int levels = 7;  // eps_k = eps0 * 2^{-k}, k = 0..levels-1
    int radial_q = 16;
    /// Quadrature for the smoothed-coefficient chain integrals.
    QuadSpec density_quad{8, 1};
    /// Quadrature for integrating the mollified current over its tube.
    QuadSpec tube_quad{8, 4};

    std::vector<double> schedule() const;
};

struct MollifiedCurrent {
    DifferentialForm form;  // degree n - r, coefficients with analytic gradients
    Current current;        // T_{phi_eps} over the eps-fattened image
    Box tube;               // integration box (eps-fattened chain bounding box)
};

/// Smooth (n-r)-form phi_eps whose coefficients are kernel-convolved chain
/// densities, together with the induced current. The chain image must sit
/// inside `scenario_box` with margin > eps.
MollifiedCurrent mollify_chain_current(const Chain& c, const MollifierSpec& spec, double eps,
                                       const Box& scenario_box);

/// |(boundary T_{phi_eps})(psi) - (mollified T_{boundary c})(psi)|, the two
/// sides computed through independent code paths.
double boundary_commutation_residual(const Chain& c, const MollifierSpec& spec, double eps,
                                     const DifferentialForm& psi, const Box& scenario_box);

struct CoalescenceStep {
    double t = 0.0;    // t = 1 - eps
    double eps = 0.0;
    double weak_distance = 0.0;  // max over battery of |T_eps(w) - T(w)|
};

/// The evolution family T_{1-eps_k} with per-step weak-distance diagnostics
/// against the singular current.
std::vector<CoalescenceStep> coalescence_schedule(const Chain& c, const MollifierSpec& spec,
                                                  int steps, const Battery& battery,
                                                  const Box& scenario_box);

}  // namespace defects
