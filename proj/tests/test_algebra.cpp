#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "defects/alternating.hpp"
#include "defects/subspace.hpp"
#include "support/oracles.hpp"

#include <random>

using namespace defects;

namespace {

std::mt19937_64 rng(20240117);

AlternatingTensor random_tensor(int n, int k, Variance var) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    AlternatingTensor t(n, k, var);
    for (int i = 0; i < t.coefficients().size(); ++i) t.raw(i) = dist(rng);
    return t;
}

Vec random_vec(int n) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

oracle::FullTensor to_full(const AlternatingTensor& t) {
    oracle::FullTensor f(t.dim(), t.degree());
    const auto& set = index_set(t.dim(), t.degree());
    for (std::size_t p = 0; p < set.size(); ++p) {
        std::vector<int> axes;
        for (int i = 0; i < t.degree(); ++i) axes.push_back(set[p][i] - 1);
        if (t.degree() == 0)
            f.data[0] = t.raw(0);
        else
            f.add_basis(axes, t.raw(static_cast<int>(p)));
    }
    return f;
}

double full_diff(const AlternatingTensor& t, const oracle::FullTensor& f) {
    oracle::FullTensor mine = to_full(t);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.data.size(); ++i)
        worst = std::max(worst, std::abs(mine.data[i] - f.data[i]));
    return worst;
}

MultiIndex mi(std::initializer_list<int> axes) { return MultiIndex(axes); }

}  // namespace

TEST_CASE("multi-index merge signs") {
    auto m = merge_indices(mi({1}), mi({2}));
    CHECK(!m.degenerate);
    CHECK(m.sign == 1);
    m = merge_indices(mi({2}), mi({1}));
    CHECK(m.sign == -1);
    m = merge_indices(mi({1, 3}), mi({2}));
    CHECK(!m.degenerate);
    CHECK(m.sign == -1);  // (1,3,2) -> one inversion
    m = merge_indices(mi({1, 2}), mi({2}));
    CHECK(m.degenerate);
    CHECK(index_count(3, 2) == 3);
    CHECK(index_count(4, 2) == 6);
}

TEST_CASE("wedge basis cases") {
    const int n = 3;
    auto dx1 = AlternatingTensor::basis(n, mi({1}), Variance::Covariant);
    auto dx2 = AlternatingTensor::basis(n, mi({2}), Variance::Covariant);

    auto w = wedge(dx1, dx2);
    CHECK(w.coeff(mi({1, 2})) == doctest::Approx(1.0));
    CHECK(wedge(dx1, dx1).max_abs_coeff() == 0.0);

    // (dx1 + dx2) ^ dx2 via the 2x2 determinant oracle: coefficient on (1,2)
    // equals det[[a1, b1], [a2, b2]] with a = (1,1,0), b = (0,1,0).
    auto s = dx1 + dx2;
    auto sw = wedge(s, dx2);
    Eigen::Matrix2d det;
    det << 1, 0, 1, 1;
    CHECK(sw.coeff(mi({1, 2})) == doctest::Approx(det.determinant()));
    CHECK(sw.coeff(mi({1, 3})) == doctest::Approx(0.0));
}

TEST_CASE("wedge matches full-tensor oracle on random inputs") {
    for (int n = 2; n <= 4; ++n)
        for (int p = 0; p <= n; ++p)
            for (int q = 0; p + q <= n; ++q)
                for (int rep = 0; rep < 8; ++rep) {
                    auto a = random_tensor(n, p, Variance::Covariant);
                    auto b = random_tensor(n, q, Variance::Covariant);
                    auto w = wedge(a, b);
                    auto fw = oracle::wedge(to_full(a), to_full(b));
                    CHECK(full_diff(w, fw) < 1e-12);
                }
}

TEST_CASE("graded anticommutativity and associativity") {
    for (int rep = 0; rep < 200; ++rep) {
        int n = 2 + int(rng() % 3);
        int p = int(rng() % (n + 1));
        int q = int(rng() % (n + 1));
        auto a = random_tensor(n, p, Variance::Covariant);
        auto b = random_tensor(n, q, Variance::Covariant);
        auto ab = wedge(a, b);
        auto ba = wedge(b, a);
        double sign = ((p * q) % 2 == 0) ? 1.0 : -1.0;
        CHECK(max_abs_diff(ab, ba * sign) < 1e-12);

        int r = int(rng() % (n + 1));
        auto c = random_tensor(n, r, Variance::Covariant);
        auto left = wedge(wedge(a, b), c);
        auto right = wedge(a, wedge(b, c));
        CHECK(max_abs_diff(left, right) < 1e-12);
    }
}

TEST_CASE("contract_vector basis and oracle cases") {
    const int n = 3;
    auto dx12 = AlternatingTensor::basis(n, mi({1, 2}), Variance::Covariant);
    Vec e1 = Vec::Zero(n), e2 = Vec::Zero(n);
    e1[0] = 1;
    e2[1] = 1;

    auto c1 = contract_vector(AlternatingTensor::from_vector(e1, Variance::Contravariant), dx12);
    CHECK(c1.coeff(mi({2})) == doctest::Approx(1.0));
    CHECK(c1.coeff(mi({1})) == doctest::Approx(0.0));

    // e2 . (dx1 ^ dx2) = -dx1, from evaluating omega(e2, e_j) for all j.
    auto c2 = contract_vector(AlternatingTensor::from_vector(e2, Variance::Contravariant), dx12);
    for (int j = 1; j <= n; ++j) {
        Vec ej = Vec::Zero(n);
        ej[j - 1] = 1;
        double expected = dx12.apply({e2, ej});
        CHECK(c2.coeff(mi({j})) == doctest::Approx(expected));
    }
    CHECK(c2.coeff(mi({1})) == doctest::Approx(-1.0));

    CHECK_THROWS(contract_vector(AlternatingTensor::from_vector(e1, Variance::Contravariant),
                                 AlternatingTensor::scalar(n, 2.0, Variance::Covariant)));
}

TEST_CASE("antiderivation identity on random tensors") {
    for (int rep = 0; rep < 300; ++rep) {
        int n = 2 + int(rng() % 3);
        int p = 1 + int(rng() % n);
        int q = int(rng() % (n - p + 1));
        if (q == 0 && (rng() % 2)) continue;  // keep some q=0 cases anyway
        auto phi = random_tensor(n, p, Variance::Covariant);
        auto om = random_tensor(n, q, Variance::Covariant);
        auto v = AlternatingTensor::from_vector(random_vec(n), Variance::Contravariant);

        auto lhs = contract_vector(v, wedge(phi, om));
        auto t1 = wedge(contract_vector(v, phi), om);
        double sgn = (p % 2 == 0) ? 1.0 : -1.0;
        AlternatingTensor t2 = (q >= 1) ? wedge(phi, contract_vector(v, om))
                                        : AlternatingTensor::zero(n, p - 1, Variance::Covariant);
        auto rhs = t1 + t2 * sgn;
        CHECK((lhs.coefficients() - rhs.coefficients()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("contract_vector matches full-tensor contraction oracle") {
    for (int rep = 0; rep < 100; ++rep) {
        int n = 2 + int(rng() % 3);
        int p = 1 + int(rng() % n);
        auto om = random_tensor(n, p, Variance::Covariant);
        Vec v = random_vec(n);
        auto mine = contract_vector(AlternatingTensor::from_vector(v, Variance::Contravariant), om);
        auto fo = oracle::contract(v, to_full(om));
        CHECK(full_diff(mine, fo) < 1e-12);
    }
}

TEST_CASE("contract_multivector basic cases") {
    const int n = 3;
    auto dx123 = AlternatingTensor::basis(n, mi({1, 2, 3}), Variance::Covariant);
    auto e12 = AlternatingTensor::basis(n, mi({1, 2}), Variance::Contravariant);

    // (e1 ^ e2) . (dx1 ^ dx2 ^ dx3) evaluated on each basis vector.
    auto c = contract_multivector(e12, dx123);
    CHECK(c.degree() == 1);
    CHECK(c.coeff(mi({3})) == doctest::Approx(1.0));
    CHECK(c.coeff(mi({1})) == doctest::Approx(0.0));

    auto dx12 = AlternatingTensor::basis(n, mi({1, 2}), Variance::Covariant);
    auto full = contract_multivector(e12, dx12);
    CHECK(full.degree() == 0);
    CHECK(full.raw(0) == doctest::Approx(1.0));

    // disjoint support
    auto e13 = AlternatingTensor::basis(n, mi({1, 3}), Variance::Contravariant);
    auto dx2 = AlternatingTensor::basis(n, mi({2}), Variance::Covariant);
    CHECK(contract_multivector(e13, wedge(dx2, dx2)).max_abs_coeff() == 0.0);

    CHECK_THROWS(contract_multivector(e12, AlternatingTensor::basis(n, mi({1}), Variance::Covariant)));
}

TEST_CASE("contract_multivector agrees with iterated contract_vector on decomposable input") {
    for (int rep = 0; rep < 100; ++rep) {
        int n = 3 + int(rng() % 2);
        int r = 2 + int(rng() % (n - 1));
        auto om = random_tensor(n, r, Variance::Covariant);
        Vec v1 = random_vec(n), v2 = random_vec(n);
        auto t1 = AlternatingTensor::from_vector(v1, Variance::Contravariant);
        auto t2 = AlternatingTensor::from_vector(v2, Variance::Contravariant);
        auto mv = wedge(t1, t2);

        auto lhs = contract_multivector(mv, om);
        // (v1 ^ v2) . omega = v2 . (v1 . omega)
        auto rhs = contract_vector(t2, contract_vector(t1, om));
        CHECK((lhs.coefficients() - rhs.coefficients()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("inner_fcontr defining relation on covector bases") {
    for (int rep = 0; rep < 150; ++rep) {
        int n = 2 + int(rng() % 3);
        int r = 1 + int(rng() % n);
        int k = int(rng() % (r + 1));
        auto mv = random_tensor(n, r, Variance::Contravariant);
        auto om = random_tensor(n, k, Variance::Covariant);
        auto inner = inner_fcontr(mv, om);
        CHECK(inner.degree() == r - k);
        for (const auto& nu : index_set(n, r - k)) {
            auto gamma = AlternatingTensor::basis(n, nu, Variance::Covariant);
            double lhs = pair_full(gamma, inner);
            double rhs = pair_full(wedge(gamma, om), mv);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("inner_fcontr named cases") {
    const int n = 3;
    auto e123 = AlternatingTensor::basis(n, mi({1, 2, 3}), Variance::Contravariant);
    auto dx3 = AlternatingTensor::basis(n, mi({3}), Variance::Covariant);
    auto r = inner_fcontr(e123, dx3);
    CHECK(r.coeff(mi({1, 2})) == doctest::Approx(1.0));
    CHECK(r.coeff(mi({1, 3})) == doctest::Approx(0.0));

    auto one = AlternatingTensor::scalar(n, 1.0, Variance::Covariant);
    auto mv = random_tensor(n, 2, Variance::Contravariant);
    auto same = inner_fcontr(mv, one);
    CHECK((same.coefficients() - mv.coefficients()).cwiseAbs().maxCoeff() == 0.0);

    auto e12 = AlternatingTensor::basis(n, mi({1, 2}), Variance::Contravariant);
    auto dx12 = AlternatingTensor::basis(n, mi({1, 2}), Variance::Covariant);
    auto full = inner_fcontr(e12, dx12);
    CHECK(full.degree() == 0);
    CHECK(full.raw(0) == doctest::Approx(1.0));

    CHECK_THROWS(inner_fcontr(dx3, dx3));
}

TEST_CASE("annihilator dimensions and re-contraction") {
    const int n = 3;
    auto dx12 = AlternatingTensor::basis(n, mi({1, 2}), Variance::Covariant);
    auto sub = annihilator(dx12);
    CHECK(sub.dim() == 1);
    Mat expected(3, 1);
    expected << 0, 0, 1;
    CHECK(Subspace::distance(sub, Subspace(3, expected)) < 1e-10);

    // phi = dz - y dx at y = 2: kernel = span{e2, e1 + 2 e3}
    AlternatingTensor phi(n, 1, Variance::Covariant);
    phi.set_coeff(mi({1}), -2.0);
    phi.set_coeff(mi({3}), 1.0);
    auto sub2 = annihilator(phi);
    CHECK(sub2.dim() == 2);
    Mat span(3, 2);
    span << 0, 1, 1, 0, 0, 2;
    CHECK(Subspace::distance(sub2, Subspace(3, span)) < 1e-10);

    // kernel oracle: every basis vector of the annihilator contracts to zero
    for (int rep = 0; rep < 50; ++rep) {
        int nn = 3 + int(rng() % 2);
        int p = 1 + int(rng() % (nn - 1));
        // build a decomposable p-covector from random 1-covectors
        auto f = random_tensor(nn, 1, Variance::Covariant);
        for (int j = 1; j < p; ++j) f = wedge(f, random_tensor(nn, 1, Variance::Covariant));
        if (f.max_abs_coeff() < 1e-3) continue;
        auto sub3 = annihilator(f);
        CHECK(sub3.dim() == nn - p);
        for (int c = 0; c < sub3.dim(); ++c) {
            auto v = AlternatingTensor::from_vector(sub3.basis().col(c), Variance::Contravariant);
            CHECK(contract_vector(v, f).max_abs_coeff() < 1e-12 * std::max(1.0, f.max_abs_coeff()));
        }
    }

    CHECK_THROWS(annihilator(AlternatingTensor::zero(3, 1, Variance::Covariant)));
}

TEST_CASE("decomposability decisions") {
    // any 1-covector
    auto f1 = random_tensor(3, 1, Variance::Covariant);
    CHECK(is_decomposable(f1).decomposable);

    // any (n-1)-covector in R^3
    auto f2 = random_tensor(3, 2, Variance::Covariant);
    CHECK(is_decomposable(f2).decomposable);

    // dx12 + dx34 in R^4 is not decomposable; expansion oracle:
    // (e1 . omega) ^ omega = dx2 ^ dx34 != 0
    AlternatingTensor om(4, 2, Variance::Covariant);
    om.set_coeff(mi({1, 2}), 1.0);
    om.set_coeff(mi({3, 4}), 1.0);
    {
        Vec e1 = Vec::Zero(4);
        e1[0] = 1;
        auto probe = oracle::wedge(oracle::contract(e1, to_full(om)), to_full(om));
        CHECK(oracle::max_abs(probe) > 0.5);
    }
    auto dec = is_decomposable(om);
    CHECK(!dec.decomposable);
    CHECK(dec.residual > 1e-2);

    // decomposable 2-covector in R^4 passes and yields a certificate
    auto a = random_tensor(4, 1, Variance::Covariant);
    auto b = random_tensor(4, 1, Variance::Covariant);
    auto w = wedge(a, b);
    auto dec2 = is_decomposable(w);
    CHECK(dec2.decomposable);
    REQUIRE(dec2.factors.size() == 2);
    auto prod = wedge(dec2.factors[0], dec2.factors[1]);
    CHECK((prod.coefficients() - w.coefficients()).cwiseAbs().maxCoeff() <
          1e-9 * std::max(1.0, w.max_abs_coeff()));

    // scale invariance of the decision
    auto scaled = om * 1e-8;
    CHECK(!is_decomposable(scaled).decomposable);
}

TEST_CASE("kernel extraction pivoting") {
    Mat a(2, 4);
    a << 1, 2, 3, 4, 2, 4, 6, 8;  // rank 1
    Mat k = kernel_basis(a);
    CHECK(k.cols() == 3);
    CHECK((a * k).cwiseAbs().maxCoeff() < 1e-12);

    Mat zero = Mat::Zero(3, 3);
    CHECK(kernel_basis(zero).cols() == 3);
}
