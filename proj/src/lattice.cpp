#include "latticeharm/lattice.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace latticeharm {

namespace {

Eigen::VectorXd combine(const Eigen::MatrixXd& basis, const IndexVec& j) {
    if (static_cast<Eigen::Index>(j.size()) != basis.cols()) {
        throw ValidationError("lattice index dimension does not match basis");
    }
    Eigen::VectorXd u(basis.cols());
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
        u[k] = static_cast<double>(j[static_cast<std::size_t>(k)]);
    }
    return basis * u;
}

}  // namespace

LatticeBasis::LatticeBasis(Eigen::MatrixXd basis, double condition_cap)
    : basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() < 1) {
        throw ValidationError("basis must be a square d x d matrix, d >= 1");
    }
    if (!basis_.allFinite()) {
        throw ValidationError("basis entries must be finite");
    }
    const int d = dim();
    double scale = 0.0;
    for (int k = 0; k < d; ++k) scale = std::max(scale, basis_.col(k).norm());

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis_);
    const auto& sv = svd.singularValues();
    const double det = basis_.determinant();
    volume_ = std::abs(det);
    if (scale == 0.0 || volume_ < 1e-12 * std::pow(scale, d)) {
        std::ostringstream msg;
        msg << "basis is singular: |det| = " << volume_;
        throw SingularBasis(msg.str());
    }
    condition_ = sv(0) / sv(d - 1);
    if (condition_ > condition_cap) {
        std::ostringstream msg;
        msg << "basis condition number " << condition_ << " exceeds cap " << condition_cap;
        throw IllConditioned(msg.str());
    }
}

Eigen::VectorXd LatticeBasis::point(const IndexVec& j) const { return combine(basis_, j); }

Eigen::VectorXd DualBasis::point(const IndexVec& j) const { return combine(basis_, j); }

DualBasis dual_basis(const LatticeBasis& basis) {
    Eigen::MatrixXd inv = basis.matrix().inverse();
    return DualBasis(kTwoPi * inv.transpose());
}

std::vector<IndexVec> enumerate_dual_lattice(const LatticeBasis& basis, double radius,
                                             std::size_t point_cap) {
    if (radius < 0.0 || !std::isfinite(radius)) {
        throw ValidationError("enumeration radius must be finite and >= 0");
    }
    const int d = basis.dim();
    const DualBasis dual = dual_basis(basis);

    // |j_k| = |<row_k of T_E'^{-1}, point>| <= ||row_k|| * radius, and
    // T_E'^{-1} = T_E^t / (2*pi), so the per-axis bound is ||e_k|| * radius / (2*pi).
    std::vector<std::int64_t> bound(static_cast<std::size_t>(d));
    double box = 1.0;
    for (int k = 0; k < d; ++k) {
        const double bk = basis.matrix().col(k).norm() * radius / kTwoPi;
        bound[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(std::floor(bk + 1e-9));
        box *= 2.0 * static_cast<double>(bound[static_cast<std::size_t>(k)]) + 1.0;
    }
    if (box > static_cast<double>(point_cap)) {
        std::ostringstream msg;
        msg << "enumeration box of " << box << " candidates exceeds cap " << point_cap;
        throw RadiusTooLarge(msg.str());
    }

    std::vector<IndexVec> out;
    IndexVec j(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) j[static_cast<std::size_t>(k)] = -bound[static_cast<std::size_t>(k)];
    for (;;) {
        if (dual.point_norm(j) <= radius) out.push_back(j);
        // odometer over the integer box; axis d-1 fastest keeps lexicographic order
        int axis = d - 1;
        while (axis >= 0) {
            auto a = static_cast<std::size_t>(axis);
            if (j[a] < bound[a]) {
                ++j[a];
                break;
            }
            j[a] = -bound[a];
            --axis;
        }
        if (axis < 0) break;
    }
    return out;
}

SampleGrid::SampleGrid(LatticeBasis basis, int points_per_axis)
    : basis_(std::move(basis)), n_(points_per_axis) {
    if (n_ < 1) throw ValidationError("sample grid needs n >= 1 points per axis");
    count_ = 1;
    for (int k = 0; k < basis_.dim(); ++k) count_ *= static_cast<std::size_t>(n_);
    weight_ = basis_.volume() / static_cast<double>(count_);
}

IndexVec SampleGrid::coords(std::size_t flat) const {
    const int d = basis_.dim();
    IndexVec c(static_cast<std::size_t>(d));
    for (int k = d - 1; k >= 0; --k) {
        c[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(flat % static_cast<std::size_t>(n_));
        flat /= static_cast<std::size_t>(n_);
    }
    return c;
}

Eigen::VectorXd SampleGrid::node(std::size_t flat) const {
    const IndexVec c = coords(flat);
    Eigen::VectorXd u(basis_.dim());
    for (int k = 0; k < basis_.dim(); ++k) {
        u[k] = static_cast<double>(c[static_cast<std::size_t>(k)]) / static_cast<double>(n_);
    }
    return basis_.matrix() * u;
}

}  // namespace latticeharm
