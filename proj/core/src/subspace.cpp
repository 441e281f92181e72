#include "defects/subspace.hpp"

#include <cmath>
#include <stdexcept>

namespace defects {

Subspace::Subspace(int n, Mat basis) : n_(n), basis_(std::move(basis)) {
    if (basis_.rows() != n) throw std::invalid_argument("Subspace: basis row count != n");
    if (basis_.cols() > 0) {
        Mat gram = basis_.transpose() * basis_;
        Eigen::FullPivLU<Mat> lu(gram);
        if (lu.rank() < basis_.cols())
            throw std::invalid_argument("Subspace: basis is linearly dependent");
    }
}

Mat Subspace::projector() const {
    if (basis_.cols() == 0) return Mat::Zero(n_, n_);
    Mat gram = basis_.transpose() * basis_;
    return basis_ * gram.ldlt().solve(basis_.transpose());
}

double Subspace::distance(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw std::invalid_argument("Subspace::distance: ambient dimension mismatch");
    return (a.projector() - b.projector()).norm();
}

Mat kernel_basis(const Mat& a, double pivot_rel_tol) {
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    Mat u = a;
    std::vector<int> col_perm(static_cast<std::size_t>(cols));
    for (int j = 0; j < cols; ++j) col_perm[static_cast<std::size_t>(j)] = j;

    const double max_entry = (rows && cols) ? a.cwiseAbs().maxCoeff() : 0.0;
    const double threshold = pivot_rel_tol * max_entry;

    int rank = 0;
    for (int step = 0; step < std::min(rows, cols); ++step) {
        // Complete pivoting: largest remaining entry.
        int pr = -1, pc = -1;
        double best = threshold;
        for (int i = rank; i < rows; ++i)
            for (int j = rank; j < cols; ++j)
                if (std::abs(u(i, j)) > best) {
                    best = std::abs(u(i, j));
                    pr = i;
                    pc = j;
                }
        if (pr < 0) break;
        u.row(rank).swap(u.row(pr));
        u.col(rank).swap(u.col(pc));
        std::swap(col_perm[static_cast<std::size_t>(rank)], col_perm[static_cast<std::size_t>(pc)]);
        for (int i = 0; i < rows; ++i) {
            if (i == rank) continue;
            double f = u(i, rank) / u(rank, rank);
            if (f != 0.0) u.row(i) -= f * u.row(rank);
        }
        ++rank;
    }

    const int nullity = cols - rank;
    Mat kernel = Mat::Zero(cols, nullity);
    for (int f = 0; f < nullity; ++f) {
        Vec x = Vec::Zero(cols);      // in permuted coordinates
        x[rank + f] = 1.0;
        for (int i = rank - 1; i >= 0; --i) {
            double rhs = 0.0;
            for (int j = i + 1; j < cols; ++j) rhs += u(i, j) * x[j];
            x[i] = -rhs / u(i, i);
        }
        for (int j = 0; j < cols; ++j) kernel(col_perm[static_cast<std::size_t>(j)], f) = x[j];
    }
    return kernel;
}

namespace {

/// Matrix of gamma -> gamma ^ omega on 1-covector coefficients; rows indexed
/// by index_set(n, k+1).
Mat wedge_by_matrix(const AlternatingTensor& omega) {
    const int n = omega.dim();
    const int k = omega.degree();
    const auto& rows = index_set(n, k + 1);
    Mat m = Mat::Zero(static_cast<int>(rows.size()), n);
    for (int axis = 1; axis <= n; ++axis) {
        AlternatingTensor gamma = AlternatingTensor::basis(n, MultiIndex{axis}, omega.variance());
        AlternatingTensor w = wedge(gamma, omega);
        for (std::size_t ridx = 0; ridx < rows.size(); ++ridx)
            m(static_cast<int>(ridx), axis - 1) = w.raw(static_cast<int>(ridx));
    }
    return m;
}

/// Attempt a factorization alpha^1 ^ ... ^ alpha^k = omega from the kernel of
/// gamma -> gamma ^ omega. Returns empty when the kernel is not k-dimensional.
std::vector<AlternatingTensor> recover_factors(const AlternatingTensor& omega) {
    const int n = omega.dim();
    const int k = omega.degree();
    std::vector<AlternatingTensor> factors;
    if (k == 0) return factors;
    if (k == 1) {
        factors.push_back(omega);
        return factors;
    }
    Mat ker = kernel_basis(wedge_by_matrix(omega));
    if (ker.cols() != k) return factors;
    for (int j = 0; j < k; ++j)
        factors.push_back(AlternatingTensor::from_vector(ker.col(j), omega.variance()));
    // Rescale the first factor so the product reproduces omega.
    AlternatingTensor prod = factors[0];
    for (int j = 1; j < k; ++j) prod = wedge(prod, factors[static_cast<std::size_t>(j)]);
    double pp = prod.coefficients().squaredNorm();
    if (pp == 0.0) return {};
    double scale = prod.coefficients().dot(omega.coefficients()) / pp;
    factors[0] *= scale;
    prod *= scale;
    double err = (prod.coefficients() - omega.coefficients()).cwiseAbs().maxCoeff();
    if (err > 1e-9 * std::max(1.0, omega.max_abs_coeff())) return {};
    return factors;
}

}  // namespace

Decomposability is_decomposable(const AlternatingTensor& omega, double rel_tol) {
    const int n = omega.dim();
    const int k = omega.degree();
    Decomposability out;

    double scale = omega.max_abs_coeff();
    if (scale == 0.0) {
        out.decomposable = true;  // the zero tensor, trivially
        return out;
    }

    if (k == 0 || k == 1 || k == n - 1 || k == n) {
        out.decomposable = true;
        out.factors = recover_factors(omega);
        return out;
    }

    // Pluecker-type test: (e_i . omega) ^ omega = 0 for all basis directions.
    // The relations act on coefficients only, so a k-vector is tested through
    // the covariant tensor with the same coefficient array.
    AlternatingTensor probe_src = omega;
    if (omega.variance() == Variance::Contravariant) {
        probe_src = AlternatingTensor(n, k, Variance::Covariant);
        probe_src.coefficients() = omega.coefficients();
    }
    double worst = 0.0;
    for (int axis = 1; axis <= n; ++axis) {
        Vec e = Vec::Zero(n);
        e[axis - 1] = 1.0;
        AlternatingTensor v = AlternatingTensor::from_vector(e, Variance::Contravariant);
        AlternatingTensor probe = wedge(contract_vector(v, probe_src), probe_src);
        worst = std::max(worst, probe.max_abs_coeff());
    }
    out.residual = worst / (scale * scale);
    out.decomposable = out.residual < rel_tol;
    if (out.decomposable) out.factors = recover_factors(omega);
    return out;
}

Subspace annihilator(const AlternatingTensor& phi) {
    const int n = phi.dim();
    const int p = phi.degree();
    if (phi.variance() != Variance::Covariant)
        throw std::invalid_argument("annihilator: expects a covector");
    if (phi.max_abs_coeff() == 0.0)
        throw std::invalid_argument("annihilator: zero covector has no annihilator subspace");
    Decomposability dec = is_decomposable(phi);
    if (!dec.decomposable)
        throw std::invalid_argument("annihilator: covector is not decomposable");

    // Matrix of v -> v . phi, rows indexed by index_set(n, p-1).
    const auto& rows = index_set(n, p - 1);
    Mat m = Mat::Zero(static_cast<int>(rows.size()), n);
    for (int axis = 1; axis <= n; ++axis) {
        Vec e = Vec::Zero(n);
        e[axis - 1] = 1.0;
        AlternatingTensor c =
            contract_vector(AlternatingTensor::from_vector(e, Variance::Contravariant), phi);
        for (std::size_t r = 0; r < rows.size(); ++r)
            m(static_cast<int>(r), axis - 1) = c.raw(static_cast<int>(r));
    }
    Mat ker = kernel_basis(m);
    Subspace out(n, ker);
    if (out.dim() != n - p)
        throw std::runtime_error("annihilator: kernel dimension != n - p");
    return out;
}

}  // namespace defects
