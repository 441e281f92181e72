#pragma once

#include "defects/currents.hpp"

namespace defects {

/// Time-dependent velocity field w(t, x) with analytic time dependence; the
/// frozen-time slice is an ordinary VectorField with exact derivatives.
class TimeVelocity {
public:
    TimeVelocity() = default;
    TimeVelocity(Box domain, std::function<Vec(double, const Vec&)> eval,
                 std::function<VectorField(double)> frozen);

    const Box& domain() const { return domain_; }
    Vec operator()(double t, const Vec& x) const { return eval_(t, x); }
    VectorField frozen(double t) const { return frozen_(t); }

    /// Velocity families; `rate(t)` multiplies the base field and is analytic
    /// (no interpolation in t).
    static TimeVelocity translation(const Vec& c, Box domain,
                                    std::function<double(double)> rate = nullptr);
    static TimeVelocity rotation_z(double omega, Box domain,
                                   std::function<double(double)> rate = nullptr);
    static TimeVelocity linear(const Mat& a, Box domain,
                               std::function<double(double)> rate = nullptr);
    static TimeVelocity shear(double kappa, Box domain,
                              std::function<double(double)> rate = nullptr);

private:
    Box domain_;
    std::function<Vec(double, const Vec&)> eval_;
    std::function<VectorField(double)> frozen_;
};

/// Flow of a time-dependent velocity field on [a, b], integrated with fixed
/// step classical RK4. Trajectories leaving the chart box are an error.
class Flow {
public:
    Flow(TimeVelocity velocity, double t_begin, double t_end, double dt);

    double t_begin() const { return a_; }
    double t_end() const { return b_; }
    double step() const { return dt_; }
    const TimeVelocity& velocity() const { return vel_; }

    /// Phi_{tau, t}(x): solve xdot = w(s, x) from s = t to s = tau.
    Vec map(double tau, double t, const Vec& x) const;

    /// Tangent map by central finite differences of `map` in x.
    Mat tangent(double tau, double t, const Vec& x) const;

    /// Phi_{tau, t} packaged for pullbacks; inverse is the reverse flow.
    MapBetweenCharts as_map(double tau, double t) const;

    /// |w^{-1}(t, x) + w(t, x)| with the inverse-flow velocity obtained by
    /// finite differences in tau.
    double inverse_velocity_residual(double t, const Vec& x, double dtau = 1e-4) const;

private:
    TimeVelocity vel_;
    double a_, b_, dt_;
    double fd_step_ = 1e-5;
};

/// Rate of the transported structure form: -L_{w_t} phi.
DifferentialForm structure_form_rate(const Flow& flow, const DifferentialForm& phi, double t);

/// Pushforward of a current along Phi_{tau, t}.
Current pushforward_current(const Flow& flow, const Current& t_current, double tau, double t);

/// Dual Lie derivative (L*_w T)(omega) = T(L_w omega).
Current dual_lie_derivative(const Current& t_current, const VectorField& w);

/// The same current assembled from boundary and wedge operators:
/// (w ^ boundary T) + boundary(w ^ T). Dimension-0 currents drop the first
/// term (their boundary vanishes identically).
Current dual_lie_decomposed(const Current& t_current, const VectorField& w);

/// Central finite difference (with one Richardson step) of
/// tau -> (Phi_{tau,t *} T)(omega) at tau = t.
double current_rate_fd(const Flow& flow, const Current& t_current, const DifferentialForm& omega,
                       double t, double dtau = 1e-3);

}  // namespace defects
