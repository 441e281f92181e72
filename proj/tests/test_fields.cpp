#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "defects/fields.hpp"
#include "support/oracles.hpp"

#include <random>

using namespace defects;

namespace {

std::mt19937_64 rng(7311);
constexpr double kPi = 3.14159265358979323846;

Vec pt3(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

Vec random_point(const Box& box, double shrink = 0.8) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec c = box.center();
    Vec x(box.dim());
    for (int i = 0; i < box.dim(); ++i) x[i] = c[i] + 0.5 * shrink * box.extent(i) * u(rng);
    return x;
}

Polynomial random_poly(int n, int max_deg = 2) {
    std::uniform_real_distribution<double> coef(-1.5, 1.5);
    std::uniform_int_distribution<int> expd(0, max_deg);
    Polynomial p;
    p.n = n;
    for (int t = 0; t < 3; ++t) {
        Polynomial::Term term{coef(rng), {0, 0, 0, 0}};
        for (int a = 0; a < n; ++a) term.exp[static_cast<std::size_t>(a)] = expd(rng);
        p.terms.push_back(term);
    }
    return p;
}

DifferentialForm random_test_form(int n, int degree, const Box& box) {
    std::uniform_real_distribution<double> shift(-0.3, 0.3);
    Vec center = box.center();
    for (int i = 0; i < n; ++i) center[i] += shift(rng);
    double radius = 0.35 * box.max_extent() / 2.0;
    std::vector<std::pair<MultiIndex, Polynomial>> parts;
    for (const auto& mu : index_set(n, degree)) parts.emplace_back(mu, random_poly(n));
    return test_form(n, degree, box, center, radius, parts);
}

}  // namespace

TEST_CASE("scalar field gradients match finite differences") {
    Box box = Box::cube(3, 1.0);
    for (int rep = 0; rep < 40; ++rep) {
        ScalarField f = ScalarField::polynomial(random_poly(3)) *
                        ScalarField::bump(pt3(0.1, -0.2, 0.0), 0.9);
        Vec x = random_point(box);
        auto fval = [&](const Vec& p) { return f.value(p); };
        Vec fd = oracle::fd_gradient(fval, x);
        Vec an = f.gradient(x);
        CHECK((fd - an).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + std::abs(f.value(x))));
    }
}

TEST_CASE("bump clamp and compact support are exact") {
    Vec c = pt3(0, 0, 0);
    ScalarField b = ScalarField::bump(c, 0.5);
    CHECK(b.value(pt3(0.5, 0, 0)) == 0.0);
    CHECK(b.value(pt3(0.7, 0.1, 0)) == 0.0);
    CHECK(b.gradient(pt3(0.9, 0, 0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(b.value(c) == doctest::Approx(1.0));
    // near the support edge the value decays smoothly to zero
    CHECK(b.value(pt3(0.499, 0, 0)) < 1e-100);
    CHECK(std::isfinite(b.gradient(pt3(0.4999, 0, 0))[0]));
}

TEST_CASE("rational_over_r2 derivatives and axis exclusion") {
    Box box = Box::cube(3, 1.0);
    Polynomial mx = Polynomial::coordinate(3, 1);
    ScalarField f = ScalarField::rational_over_r2(mx, 1);  // x / (x^2 + y^2)
    for (int rep = 0; rep < 30; ++rep) {
        Vec x = random_point(box);
        if (std::hypot(x[0], x[1]) < 0.2) continue;
        Vec fd = oracle::fd_gradient([&](const Vec& p) { return f.value(p); }, x);
        CHECK((fd - f.gradient(x)).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + std::abs(f.value(x))));
        Mat h = f.hessian(x);
        // hessian row i should differentiate gradient component i
        for (int i = 0; i < 3; ++i) {
            Vec fdh = oracle::fd_gradient([&](const Vec& p) { return f.gradient(p)[i]; }, x);
            CHECK((fdh - Vec(h.row(i))).cwiseAbs().maxCoeff() < 1e-5 * (1.0 + std::abs(f.value(x))));
        }
    }
    CHECK_THROWS_AS((void)f.value(pt3(0, 0, 0.3)), std::domain_error);
}

TEST_CASE("eval_form basics and the layering form at a point") {
    Box box = Box::cube(3, 2.0);
    double b = 2.0;
    DifferentialForm phi = screw_form(b, box);
    AlternatingTensor t = eval_form(phi, pt3(1, 0, 0));
    // d theta at (1,0,0) is dy, so phi = -(b/2pi) dy + dz there
    CHECK(t.coeff(MultiIndex{1}) == doctest::Approx(0.0));
    CHECK(t.coeff(MultiIndex{2}) == doctest::Approx(-b / (2 * kPi)));
    CHECK(t.coeff(MultiIndex{3}) == doctest::Approx(1.0));

    DifferentialForm zero(3, 1, box);
    CHECK(zero(pt3(0.3, 0.4, 0.5)).max_abs_coeff() == 0.0);

    DifferentialForm dz(3, 1, box);
    dz.set_coeff(MultiIndex{3}, ScalarField::constant(3, 1.0));
    CHECK(dz(random_point(box)).coeff(MultiIndex{3}) == doctest::Approx(1.0));

    CHECK_THROWS_AS((void)phi(pt3(5, 0, 0)), std::domain_error);
}

TEST_CASE("exterior derivative: hand cases and closedness of the layering form") {
    Box box = Box::cube(3, 1.5);
    // d(x^2 dy) = 2x dx ^ dy
    DifferentialForm om(3, 1, box);
    Polynomial x2 = Polynomial::coordinate(3, 1);
    x2.terms[0].exp[0] = 2;
    om.set_coeff(MultiIndex{2}, ScalarField::polynomial(x2));
    DifferentialForm d = om.exterior_derivative();
    Vec x = pt3(0.7, -0.3, 0.2);
    CHECK(d(x).coeff(MultiIndex{1, 2}) == doctest::Approx(2 * 0.7));
    CHECK(d(x).coeff(MultiIndex{1, 3}) == doctest::Approx(0.0));

    // d(dx) = 0
    DifferentialForm dx(3, 1, box);
    dx.set_coeff(MultiIndex{1}, ScalarField::constant(3, 1.0));
    CHECK(dx.exterior_derivative()(x).max_abs_coeff() == 0.0);

    // screw form is closed away from the axis
    DifferentialForm phi = screw_form(1.0, box);
    DifferentialForm dphi = phi.exterior_derivative();
    for (int rep = 0; rep < 25; ++rep) {
        Vec p = random_point(box);
        if (std::hypot(p[0], p[1]) < 0.2) continue;
        CHECK(dphi(p).max_abs_coeff() < 1e-12);
    }
}

TEST_CASE("d o d = 0 on the polynomial x bump family") {
    Box box = Box::cube(3, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        DifferentialForm om = random_test_form(3, 1, box);
        DifferentialForm dd = om.exterior_derivative().exterior_derivative();
        for (int s = 0; s < 10; ++s) {
            Vec x = random_point(box);
            CHECK(dd(x).max_abs_coeff() < 1e-8);
        }
    }
}

TEST_CASE("pullback: circle inclusion picks out the d theta component") {
    Box box = Box::cube(3, 3.0);
    double b = 1.75, radius = 0.8, level = 0.25;
    DifferentialForm phi = screw_form(b, box);

    // inclusion of the circle S_{r,l}: t in [0, 2pi] -> (r cos t, r sin t, l)
    Box param;
    param.lo = Vec::Zero(1);
    param.hi = Vec::Constant(1, 2 * kPi);
    // embed the parameter into R^3 to reuse the chart machinery pointwise
    for (double t : {0.3, 1.2, 2.9, 4.4}) {
        Vec u(1);
        u << t;
        Mat j(3, 1);
        j << -radius * std::sin(t), radius * std::cos(t), 0.0;
        AlternatingTensor w = phi(pt3(radius * std::cos(t), radius * std::sin(t), level));
        // omega(dg/dt) = -(b/2pi) d theta(dg/dt) = -b/2pi
        std::vector<Vec> arg{Vec(j.col(0))};
        CHECK(w.apply(arg) == doctest::Approx(-b / (2 * kPi)).epsilon(1e-10));
    }
}

TEST_CASE("pullback identity, naturality, functoriality, and wedge compatibility") {
    Box box = Box::cube(3, 1.2);
    auto id = MapBetweenCharts::identity(box);
    for (int rep = 0; rep < 10; ++rep) {
        DifferentialForm om = random_test_form(3, 1 + int(rng() % 2), box);
        DifferentialForm pb = pullback(id, om);
        Vec x = random_point(box);
        CHECK(max_abs_diff(pb(x), om(x)) < 1e-12);
    }

    // random affine maps f, g with images inside the domain
    std::uniform_real_distribution<double> small(-0.08, 0.08);
    Mat a = Mat::Identity(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) += small(rng);
    Vec shift = 0.05 * Vec::Random(3);
    auto f = MapBetweenCharts::affine(box, a, shift);

    Mat a2 = Mat::Identity(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a2(i, j) += small(rng);
    auto g = MapBetweenCharts::affine(box, a2, Vec::Zero(3));

    for (int rep = 0; rep < 8; ++rep) {
        int p = 1 + int(rng() % 2);
        DifferentialForm om = random_test_form(3, p, box);
        // naturality: d(f* om) = f*(d om)
        DifferentialForm lhs = pullback(f, om).exterior_derivative();
        DifferentialForm rhs = pullback(f, om.exterior_derivative());
        Vec x = random_point(box, 0.5);
        CHECK(max_abs_diff(lhs(x), rhs(x)) < 1e-8);

        // functoriality: (g o f)* = f* o g*
        auto gof = MapBetweenCharts::compose(g, f);
        DifferentialForm once = pullback(gof, om);
        DifferentialForm twice = pullback(f, pullback(g, om));
        CHECK(max_abs_diff(once(x), twice(x)) < 1e-10);

        // f*(alpha ^ beta) = f*alpha ^ f*beta
        DifferentialForm beta = random_test_form(3, 1, box);
        DifferentialForm w1 = pullback(f, wedge(om, beta));
        DifferentialForm w2 = wedge(pullback(f, om), pullback(f, beta));
        CHECK(max_abs_diff(w1(x), w2(x)) < 1e-10);
    }
}

TEST_CASE("lie derivative hand cases") {
    Box box = Box::cube(3, 1.0);
    // w = e1, omega = x^1 dx^2 -> L_w omega = dx^2
    VectorField w = VectorField::constant(pt3(1, 0, 0), box);
    DifferentialForm om(3, 1, box);
    om.set_coeff(MultiIndex{2}, ScalarField::coordinate(3, 1));
    DifferentialForm lie = lie_derivative(w, om);
    Vec x = random_point(box);
    CHECK(lie(x).coeff(MultiIndex{2}) == doctest::Approx(1.0));
    CHECK(lie(x).coeff(MultiIndex{1}) == doctest::Approx(0.0));

    // w = 0 -> 0
    VectorField zero = VectorField::constant(Vec::Zero(3), box);
    DifferentialForm res = lie_derivative(zero, random_test_form(3, 2, box));
    CHECK(res(x).max_abs_coeff() < 1e-15);
}

TEST_CASE("lie derivative commutes with d") {
    Box box = Box::cube(3, 1.0);
    std::vector<Polynomial> comps;
    for (int i = 0; i < 3; ++i) comps.push_back(random_poly(3, 1));
    VectorField w = VectorField::from_polynomials(comps, box);
    for (int rep = 0; rep < 6; ++rep) {
        DifferentialForm om = random_test_form(3, 1, box);
        DifferentialForm lhs = lie_derivative(w, om.exterior_derivative());
        DifferentialForm rhs = lie_derivative(w, om).exterior_derivative();
        for (int s = 0; s < 5; ++s) {
            Vec x = random_point(box);
            double scale = std::max(1.0, lhs(x).max_abs_coeff());
            CHECK(max_abs_diff(lhs(x), rhs(x)) < 1e-8 * scale);
        }
    }
}

TEST_CASE("director field: axis case, disclination case, rescaling") {
    Box box = Box::cube(3, 1.0);
    std::vector<Vec> samples;
    for (int s = 0; s < 20; ++s) {
        Vec x = random_point(box);
        if (std::hypot(x[0], x[1]) < 0.25) continue;
        samples.push_back(x);
    }

    DifferentialForm theta(3, 3, box);
    theta.set_coeff(MultiIndex{1, 2, 3}, ScalarField::constant(3, 1.0));

    DifferentialForm dxdy(3, 2, box);
    dxdy.set_coeff(MultiIndex{1, 2}, ScalarField::constant(3, 1.0));
    VectorField u = director_field(dxdy, theta, samples);
    CHECK((u(samples[0]) - pt3(0, 0, 1)).cwiseAbs().maxCoeff() < 1e-12);

    // d theta ^ dz: the induced director is radial with magnitude 1/r
    DifferentialForm incl = dtheta_wedge_dz(box);
    VectorField ur = director_field(incl, theta, samples);
    for (const auto& x : samples) {
        double r = std::hypot(x[0], x[1]);
        Vec v = ur(x);
        CHECK(v[2] == doctest::Approx(0.0));
        CHECK(v.norm() == doctest::Approx(1.0 / r).epsilon(1e-9));
        // radial direction
        CHECK(v[0] * x[1] - v[1] * x[0] == doctest::Approx(0.0).epsilon(1e-9));
    }

    // doubling theta halves u but keeps the span
    VectorField u2 = director_field(dxdy, theta * 2.0, samples);
    Vec a = u(samples[0]), bb = u2(samples[0]);
    CHECK((a - 2.0 * bb).cwiseAbs().maxCoeff() < 1e-12);
    Mat sa(3, 1), sb(3, 1);
    sa.col(0) = a;
    sb.col(0) = bb;
    CHECK(Subspace::distance(Subspace(3, sa), Subspace(3, sb)) < 1e-10);

    // vanishing volume form is rejected
    DifferentialForm bad(3, 3, box);
    bad.set_coeff(MultiIndex{1, 2, 3}, ScalarField::coordinate(3, 1));
    CHECK_THROWS(director_field(dxdy, bad, {pt3(0, 0.5, 0)}));
}

TEST_CASE("frobenius check: involutive and contact cases") {
    Box box = Box::cube(3, 1.0);
    std::vector<Vec> samples;
    for (int s = 0; s < 12; ++s) samples.push_back(random_point(box));

    DifferentialForm dz(3, 1, box);
    dz.set_coeff(MultiIndex{3}, ScalarField::constant(3, 1.0));
    CHECK(frobenius_check(dz, samples).involutive);

    // contact form dz - y dx: d phi ^ phi = dx ^ dy ^ dz
    DifferentialForm contact(3, 1, box);
    Polynomial my = Polynomial::coordinate(3, 2);
    my.terms[0].coef = -1.0;
    contact.set_coeff(MultiIndex{1}, ScalarField::polynomial(my));
    contact.set_coeff(MultiIndex{3}, ScalarField::constant(3, 1.0));
    auto res = frobenius_check(contact, samples);
    CHECK(!res.involutive);
    AlternatingTensor probe =
        wedge(contact.exterior_derivative()(samples[0]), contact(samples[0]));
    CHECK(probe.coeff(MultiIndex{1, 2, 3}) == doctest::Approx(1.0));

    // any (n-1)-form is involutive
    DifferentialForm two = random_test_form(3, 2, box);
    CHECK(frobenius_check(two, samples).involutive);

    // integrating factor: phi = e^x dz has a = e^{-x} with d(a phi) = 0;
    // realized polynomially as phi = (1 + x^2) dz, a = 1/(1+x^2).
    DifferentialForm scaled(3, 1, box);
    Polynomial onepx2;
    onepx2.n = 3;
    onepx2.terms.push_back({1.0, {0, 0, 0, 0}});
    onepx2.terms.push_back({1.0, {2, 0, 0, 0}});
    scaled.set_coeff(MultiIndex{3}, ScalarField::polynomial(onepx2));
    CHECK(frobenius_check(scaled, samples).involutive);

    // unsupported intermediate degree is flagged
    Box box4 = Box::cube(4, 1.0);
    DifferentialForm mid(4, 2, box4);
    mid.set_coeff(MultiIndex{1, 2}, ScalarField::constant(4, 1.0));
    std::vector<Vec> s4{box4.center()};
    CHECK_THROWS(frobenius_check(mid, s4));
}

TEST_CASE("interface form switches across the hyperplane") {
    Box box = Box::cube(3, 1.0);
    AlternatingTensor lo(3, 2, Variance::Covariant), up(3, 2, Variance::Covariant);
    lo.set_coeff(MultiIndex{1, 2}, 2.0);
    up.set_coeff(MultiIndex{1, 2}, 1.0);
    DifferentialForm phi = interface_form(3, box, lo, up);
    CHECK(phi(pt3(0.1, 0.2, -0.4)).coeff(MultiIndex{1, 2}) == doctest::Approx(2.0));
    CHECK(phi(pt3(0.1, 0.2, 0.4)).coeff(MultiIndex{1, 2}) == doctest::Approx(1.0));
}
