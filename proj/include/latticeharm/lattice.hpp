#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "latticeharm/errors.hpp"

namespace latticeharm {

/// Integer coordinates of a lattice point. Lexicographic ordering of the
/// coordinate vector (std::vector::operator<) is the canonical enumeration
/// and map order everywhere in the library.
using IndexVec = std::vector<std::int64_t>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Basis matrix of a non-degenerate parallelepiped E. Columns are the basis
/// vectors e_1..e_d; the primal lattice is the set of integer combinations.
/// Immutable after construction.
class LatticeBasis {
public:
    /// Validates on construction: throws SingularBasis when |det| falls
    /// below 1e-12 * scale^d (scale = max column norm) and IllConditioned
    /// when the spectral condition number exceeds `condition_cap`.
    explicit LatticeBasis(Eigen::MatrixXd basis, double condition_cap = kDefaultConditionCap);

    int dim() const { return static_cast<int>(basis_.rows()); }
    const Eigen::MatrixXd& matrix() const { return basis_; }
    double volume() const { return volume_; }
    double condition() const { return condition_; }

    /// Primal lattice point of integer coordinates j: sum_k j_k e_k.
    Eigen::VectorXd point(const IndexVec& j) const;

    bool same_as(const LatticeBasis& other) const { return basis_ == other.basis_; }

    static constexpr double kDefaultConditionCap = 1e8;

private:
    Eigen::MatrixXd basis_;
    double volume_ = 0.0;
    double condition_ = 0.0;
};

/// Dual basis e'_1..e'_d with <e_j, e'_k> = 2*pi*delta_jk; generates the
/// dual lattice by integer combinations.
class DualBasis {
public:
    explicit DualBasis(Eigen::MatrixXd basis) : basis_(std::move(basis)) {}

    int dim() const { return static_cast<int>(basis_.rows()); }
    const Eigen::MatrixXd& matrix() const { return basis_; }

    /// Dual lattice point of integer coordinates j: sum_k j_k e'_k.
    Eigen::VectorXd point(const IndexVec& j) const;
    double point_norm(const IndexVec& j) const { return point(j).norm(); }

private:
    Eigen::MatrixXd basis_;
};

/// T_E' = 2*pi*(T_E^{-1})^t.
DualBasis dual_basis(const LatticeBasis& basis);

/// All dual-lattice indices j with |point(j)| <= radius, in lexicographic
/// order on the integer coordinates. Throws RadiusTooLarge when the scanned
/// integer box would exceed `point_cap` candidates.
std::vector<IndexVec> enumerate_dual_lattice(const LatticeBasis& basis, double radius,
                                             std::size_t point_cap = 10'000'000);

/// Uniform sampling grid over the fundamental domain: nodes x(u) = T_E * u,
/// u in {0, 1/n, ..., (n-1)/n}^d, flattened in lexicographic order of the
/// integer grid coordinates (last axis fastest). Each node carries the
/// rectangle-rule weight |E| / n^d.
class SampleGrid {
public:
    SampleGrid(LatticeBasis basis, int points_per_axis);

    const LatticeBasis& basis() const { return basis_; }
    int points_per_axis() const { return n_; }
    std::size_t size() const { return count_; }
    double weight() const { return weight_; }

    /// Integer grid coordinates of the flattened node index.
    IndexVec coords(std::size_t flat) const;
    Eigen::VectorXd node(std::size_t flat) const;

private:
    LatticeBasis basis_;
    int n_;
    std::size_t count_;
    double weight_;
};

inline SampleGrid sample_grid(const LatticeBasis& basis, int points_per_axis) {
    return SampleGrid(basis, points_per_axis);
}

}  // namespace latticeharm
