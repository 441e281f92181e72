#include "defects/alternating.hpp"

#include <stdexcept>

namespace defects {

namespace {

void require_compatible(const AlternatingTensor& a, const AlternatingTensor& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("alternating: dimension mismatch");
    if (a.variance() != b.variance()) throw std::invalid_argument("alternating: variance mismatch");
}

}  // namespace

AlternatingTensor::AlternatingTensor(int n, int degree, Variance var)
    : n_(n), k_(degree), var_(var) {
    if (n < 0 || n > 4) throw std::invalid_argument("AlternatingTensor: n must be in 0..4");
    if (degree < 0) throw std::invalid_argument("AlternatingTensor: negative degree");
    coeffs_ = Vec::Zero(index_count(n, degree));
}

AlternatingTensor AlternatingTensor::basis(int n, const MultiIndex& mu, Variance var) {
    AlternatingTensor t(n, mu.degree(), var);
    if (!mu.valid(n)) throw std::invalid_argument("basis: invalid multi-index " + mu.to_string());
    t.set_coeff(mu, 1.0);
    return t;
}

AlternatingTensor AlternatingTensor::scalar(int n, double value, Variance var) {
    AlternatingTensor t(n, 0, var);
    t.coeffs_[0] = value;
    return t;
}

AlternatingTensor AlternatingTensor::from_vector(const Vec& v, Variance var) {
    AlternatingTensor t(static_cast<int>(v.size()), 1, var);
    t.coeffs_ = v;
    return t;
}

double AlternatingTensor::coeff(const MultiIndex& mu) const {
    int pos = index_position(n_, mu);
    if (pos < 0) return 0.0;
    return coeffs_[pos];
}

void AlternatingTensor::set_coeff(const MultiIndex& mu, double value) {
    int pos = index_position(n_, mu);
    if (pos < 0) throw std::invalid_argument("set_coeff: index " + mu.to_string() + " out of range");
    coeffs_[pos] = value;
}

double AlternatingTensor::max_abs_coeff() const {
    return coeffs_.size() ? coeffs_.cwiseAbs().maxCoeff() : 0.0;
}

double AlternatingTensor::apply(const std::vector<Vec>& args) const {
    if (static_cast<int>(args.size()) != k_)
        throw std::invalid_argument("apply: expected " + std::to_string(k_) + " arguments");
    if (k_ == 0) return coeffs_[0];
    // omega(v_1,...,v_k) = sum_mu omega_mu det[v_j^{mu_i}]
    const auto& set = index_set(n_, k_);
    double total = 0.0;
    Mat minor(k_, k_);
    for (std::size_t p = 0; p < set.size(); ++p) {
        if (coeffs_[static_cast<int>(p)] == 0.0) continue;
        for (int row = 0; row < k_; ++row)
            for (int col = 0; col < k_; ++col)
                minor(row, col) = args[static_cast<std::size_t>(col)][set[p][row] - 1];
        total += coeffs_[static_cast<int>(p)] * minor.determinant();
    }
    return total;
}

AlternatingTensor& AlternatingTensor::operator+=(const AlternatingTensor& other) {
    require_compatible(*this, other);
    if (k_ != other.k_) throw std::invalid_argument("alternating: degree mismatch in sum");
    coeffs_ += other.coeffs_;
    return *this;
}

AlternatingTensor& AlternatingTensor::operator-=(const AlternatingTensor& other) {
    require_compatible(*this, other);
    if (k_ != other.k_) throw std::invalid_argument("alternating: degree mismatch in difference");
    coeffs_ -= other.coeffs_;
    return *this;
}

AlternatingTensor& AlternatingTensor::operator*=(double s) {
    coeffs_ *= s;
    return *this;
}

AlternatingTensor wedge(const AlternatingTensor& a, const AlternatingTensor& b) {
    require_compatible(a, b);
    const int n = a.dim();
    AlternatingTensor out(n, a.degree() + b.degree(), a.variance());
    if (a.degree() + b.degree() > n) return out;  // zero tensor of that degree

    const auto& sa = index_set(n, a.degree());
    const auto& sb = index_set(n, b.degree());
    for (std::size_t i = 0; i < sa.size(); ++i) {
        double ca = a.raw(static_cast<int>(i));
        if (ca == 0.0) continue;
        for (std::size_t j = 0; j < sb.size(); ++j) {
            double cb = b.raw(static_cast<int>(j));
            if (cb == 0.0) continue;
            MergeResult m = merge_indices(sa[i], sb[j]);
            if (m.degenerate) continue;
            int pos = index_position(n, m.merged);
            out.raw(pos) += m.sign * ca * cb;
        }
    }
    return out;
}

AlternatingTensor contract_vector(const AlternatingTensor& v, const AlternatingTensor& omega) {
    if (v.dim() != omega.dim()) throw std::invalid_argument("contract_vector: dimension mismatch");
    if (v.degree() != 1 || v.variance() != Variance::Contravariant)
        throw std::invalid_argument("contract_vector: first argument must be a degree-1 vector");
    if (omega.variance() != Variance::Covariant)
        throw std::invalid_argument("contract_vector: second argument must be a covector");
    if (omega.degree() < 1)
        throw std::invalid_argument("contract_vector: cannot contract a 0-covector");

    const int n = omega.dim();
    AlternatingTensor out(n, omega.degree() - 1, Variance::Covariant);
    const auto& target = index_set(n, omega.degree() - 1);
    for (std::size_t t = 0; t < target.size(); ++t) {
        // (v . omega)(e_nu) = omega(v ^ e_nu) = sum_i v^i sign(i,nu) omega_{i u nu}
        double acc = 0.0;
        for (int axis = 1; axis <= n; ++axis) {
            double vi = v.coefficients()[axis - 1];
            if (vi == 0.0) continue;
            MergeResult m = merge_axis(axis, target[t]);
            if (m.degenerate) continue;
            acc += vi * m.sign * omega.coeff(m.merged);
        }
        out.raw(static_cast<int>(t)) = acc;
    }
    return out;
}

AlternatingTensor contract_multivector(const AlternatingTensor& mv, const AlternatingTensor& omega) {
    if (mv.dim() != omega.dim()) throw std::invalid_argument("contract_multivector: dimension mismatch");
    if (mv.variance() != Variance::Contravariant || omega.variance() != Variance::Covariant)
        throw std::invalid_argument("contract_multivector: expects (vector, covector) arguments");
    const int m = mv.degree(), r = omega.degree();
    if (m > r) throw std::invalid_argument("contract_multivector: multivector degree exceeds form degree");

    const int n = omega.dim();
    AlternatingTensor out(n, r - m, Variance::Covariant);
    const auto& target = index_set(n, r - m);
    const auto& source = index_set(n, m);
    for (std::size_t t = 0; t < target.size(); ++t) {
        double acc = 0.0;
        for (std::size_t s = 0; s < source.size(); ++s) {
            double c = mv.raw(static_cast<int>(s));
            if (c == 0.0) continue;
            MergeResult mg = merge_indices(source[s], target[t]);
            if (mg.degenerate) continue;
            acc += c * mg.sign * omega.coeff(mg.merged);
        }
        out.raw(static_cast<int>(t)) = acc;
    }
    return out;
}

AlternatingTensor inner_fcontr(const AlternatingTensor& mv, const AlternatingTensor& omega) {
    if (mv.dim() != omega.dim()) throw std::invalid_argument("inner_fcontr: dimension mismatch");
    if (mv.variance() != Variance::Contravariant || omega.variance() != Variance::Covariant)
        throw std::invalid_argument("inner_fcontr: expects (vector, covector) arguments");
    const int r = mv.degree(), k = omega.degree();
    if (k > r) throw std::invalid_argument("inner_fcontr: covector degree exceeds multivector degree");

    const int n = omega.dim();
    AlternatingTensor out(n, r - k, Variance::Contravariant);
    const auto& target = index_set(n, r - k);
    for (std::size_t t = 0; t < target.size(); ++t) {
        // Component on e_nu solves gamma(V L omega) = (gamma ^ omega)(V) with gamma = dx^nu.
        const auto& ko = index_set(n, k);
        double acc = 0.0;
        for (std::size_t s = 0; s < ko.size(); ++s) {
            double c = omega.raw(static_cast<int>(s));
            if (c == 0.0) continue;
            MergeResult mg = merge_indices(target[t], ko[s]);
            if (mg.degenerate) continue;
            acc += c * mg.sign * mv.coeff(mg.merged);
        }
        out.raw(static_cast<int>(t)) = acc;
    }
    return out;
}

double pair_full(const AlternatingTensor& covector, const AlternatingTensor& vector) {
    if (covector.dim() != vector.dim() || covector.degree() != vector.degree())
        throw std::invalid_argument("pair_full: degree/dimension mismatch");
    if (covector.variance() != Variance::Covariant || vector.variance() != Variance::Contravariant)
        throw std::invalid_argument("pair_full: expects (covector, vector)");
    return covector.coefficients().dot(vector.coefficients());
}

}  // namespace defects

namespace defects {

double max_abs_diff(const AlternatingTensor& a, const AlternatingTensor& b) {
    if (a.dim() != b.dim() || a.degree() != b.degree())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    if (a.coefficients().size() == 0) return 0.0;
    return (a.coefficients() - b.coefficients()).cwiseAbs().maxCoeff();
}

}  // namespace defects
