#pragma once

// Test-only oracles, independent of the production code paths they check.
// Alternating tensors are represented here as full (non-reduced) component
// arrays with explicit antisymmetrization; products and contractions are
// evaluated from first principles by summing over permutations.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;

/// Full component array of a degree-k alternating tensor over R^n:
/// value(i_1,...,i_k) with 0-based axes, antisymmetric by construction.
struct FullTensor {
    int n = 0;
    int k = 0;
    std::vector<double> data;  // n^k entries, row-major

    FullTensor(int n_, int k_) : n(n_), k(k_), data(std::size_t(std::pow(n_, k_)), 0.0) {}

    std::size_t offset(const std::vector<int>& idx) const {
        std::size_t o = 0;
        for (int i : idx) o = o * std::size_t(n) + std::size_t(i);
        return o;
    }
    double operator()(const std::vector<int>& idx) const { return data[offset(idx)]; }
    double& at(const std::vector<int>& idx) { return data[offset(idx)]; }

    static int perm_sign(std::vector<int> p) {
        int sign = 1;
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = i + 1; j < p.size(); ++j)
                if (p[i] > p[j]) sign = -sign;
        return sign;
    }

    /// Build from a coefficient on a strictly increasing index (0-based) by
    /// filling all permutations with signs.
    void add_basis(const std::vector<int>& inc, double coeff) {
        std::vector<int> perm = inc;
        std::sort(perm.begin(), perm.end());
        do {
            // sign of perm relative to sorted order
            std::vector<int> rel(perm.size());
            for (std::size_t i = 0; i < perm.size(); ++i)
                rel[i] = int(std::lower_bound(inc.begin(), inc.end(), perm[i]) - inc.begin());
            at(perm) += perm_sign(rel) * coeff;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
};

/// Wedge product via the shuffle formula:
/// (a ^ b)(v_1..v_{p+q}) = sum over (p,q)-shuffles sign * a(...) * b(...).
inline FullTensor wedge(const FullTensor& a, const FullTensor& b) {
    FullTensor out(a.n, a.k + b.k);
    if (out.k > a.n) return out;
    const int total = a.k + b.k;
    std::vector<int> axes(std::size_t(total), 0);
    std::function<void(int)> loop = [&](int slot) {
        if (slot == total) {
            // sum over shuffles
            double acc = 0.0;
            std::vector<bool> pick(std::size_t(total), false);
            std::function<void(int, int)> choose = [&](int from, int chosen) {
                if (chosen == a.k) {
                    std::vector<int> ia, ib, order;
                    for (int i = 0; i < total; ++i)
                        if (pick[std::size_t(i)]) {
                            ia.push_back(axes[std::size_t(i)]);
                            order.push_back(i);
                        }
                    for (int i = 0; i < total; ++i)
                        if (!pick[std::size_t(i)]) {
                            ib.push_back(axes[std::size_t(i)]);
                            order.push_back(i);
                        }
                    acc += FullTensor::perm_sign(order) * a(ia) * b(ib);
                    return;
                }
                for (int i = from; i < total; ++i) {
                    pick[std::size_t(i)] = true;
                    choose(i + 1, chosen + 1);
                    pick[std::size_t(i)] = false;
                }
            };
            choose(0, 0);
            out.at(axes) = acc;
            return;
        }
        for (int ax = 0; ax < a.n; ++ax) {
            axes[std::size_t(slot)] = ax;
            loop(slot + 1);
        }
    };
    loop(0);
    return out;
}

/// Contraction with a single vector in the first slot.
inline FullTensor contract(const Vec& v, const FullTensor& w) {
    FullTensor out(w.n, w.k - 1);
    std::vector<int> axes(std::size_t(w.k - 1), 0);
    std::function<void(int)> loop = [&](int slot) {
        if (slot == w.k - 1) {
            double acc = 0.0;
            std::vector<int> full(std::size_t(w.k));
            for (int first = 0; first < w.n; ++first) {
                full[0] = first;
                for (int i = 0; i < w.k - 1; ++i) full[std::size_t(i) + 1] = axes[std::size_t(i)];
                acc += v[first] * w(full);
            }
            out.at(axes) = acc;
            return;
        }
        for (int ax = 0; ax < w.n; ++ax) {
            axes[std::size_t(slot)] = ax;
            loop(slot + 1);
        }
    };
    loop(0);
    return out;
}

inline double max_abs(const FullTensor& t) {
    double m = 0.0;
    for (double x : t.data) m = std::max(m, std::abs(x));
    return m;
}

/// Composite-Simpson 1D quadrature oracle (independent of Gauss-Legendre).
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 512) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// 3D composite-Simpson quadrature oracle.
inline double simpson3(const std::function<double(double, double, double)>& f,
                       const std::array<double, 3>& lo, const std::array<double, 3>& hi,
                       int panels = 32) {
    auto inner_yz = [&](double x) {
        auto inner_z = [&](double y) {
            return simpson([&](double z) { return f(x, y, z); }, lo[2], hi[2], panels);
        };
        return simpson(inner_z, lo[1], hi[1], panels);
    };
    return simpson(inner_yz, lo[0], hi[0], panels);
}

/// Central finite-difference gradient.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-5) {
    Vec g(x.size());
    for (int i = 0; i < x.size(); ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2 * h);
    }
    return g;
}

}  // namespace oracle
