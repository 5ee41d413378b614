#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "latticeharm/lattice.hpp"

namespace latticeharm {

using Complex = std::complex<double>;

/// Fourier series of an E-periodic element: a finite map from dual-lattice
/// integer indices to coefficients c(f, alpha). Absent keys are zero;
/// exact zeros are pruned on construction. Iteration order of the map is
/// lexicographic on the integer coordinates, which fixes every summation
/// order in the library.
class FourierSeries {
public:
    using CoeffMap = std::map<IndexVec, Complex>;

    FourierSeries(LatticeBasis lattice, CoeffMap coeffs);

    const LatticeBasis& lattice() const { return lattice_; }
    const DualBasis& dual() const { return dual_; }
    const CoeffMap& coeffs() const { return coeffs_; }

    Complex at(const IndexVec& alpha) const;
    std::size_t support_size() const { return coeffs_.size(); }
    bool empty() const { return coeffs_.empty(); }

    /// Largest Euclidean norm of a supported dual-lattice point (0 if empty).
    double max_mode_radius() const;

    /// Largest |j_k| over all supported integer indices (0 if empty).
    std::int64_t max_index_coord() const;

    FourierSeries scaled(Complex factor) const;

private:
    LatticeBasis lattice_;
    DualBasis dual_;
    CoeffMap coeffs_;
};

/// Complex samples of an E-periodic function on a SampleGrid, in the grid's
/// flattening order.
struct PeriodicSamples {
    SampleGrid grid;
    std::vector<Complex> values;

    PeriodicSamples(SampleGrid g, std::vector<Complex> v);
};

/// Fourier coefficients by rectangle-rule quadrature of
/// |E|^{-1} \int_E f(x) e^{-i<x,alpha>} dx over all dual indices with
/// |point| <= max_radius. Exact (to roundoff) for trigonometric polynomials
/// band-limited inside max_radius when the grid satisfies the Nyquist
/// condition n > 2 * max |j_k|; throws NyquistViolation otherwise.
FourierSeries analyze(const PeriodicSamples& samples, double max_radius);

/// Evaluates sum_alpha c(alpha) e^{i<x,alpha>} at arbitrary points.
std::vector<Complex> synthesize(const FourierSeries& series,
                                const std::vector<Eigen::VectorXd>& points);
Complex synthesize_at(const FourierSeries& series, const Eigen::VectorXd& point);

/// Evaluates the series on a SampleGrid using exact integer mode phases
/// (<x_m, alpha_j> = 2*pi*(m.j)/n on any basis).
PeriodicSamples synthesize_on_grid(const FourierSeries& series, int points_per_axis);

/// (f, g)_E = sum_alpha c(f,alpha) * conj(c(g,alpha)) when `conjugate` is
/// set (the scalar product), sum_alpha c(f,alpha) * c(g,alpha) otherwise
/// (the bilinear form <f, g>_E). Summation runs over the union of supports
/// in lexicographic order. Throws LatticeMismatch when the series do not
/// share a basis.
Complex pairing_E(const FourierSeries& f, const FourierSeries& g, bool conjugate = true);

/// ||f||_E = sqrt((f, f)_E) = |E|^{-1/2} ||f||_{L^2(E)}.
double norm_E(const FourierSeries& f);

struct DistributionAction {
    Complex value;
    double tail_estimate = 0.0;
};

/// Action of the periodic distribution on a test function given by its
/// Fourier transform: (2*pi)^{d/2} * sum_alpha c(f,alpha) * test_ft(-alpha).
/// The tail estimate is the summed magnitude of the outermost radius shell;
/// throws TailTooLarge when it exceeds `tail_tolerance`.
DistributionAction distribution_action(const FourierSeries& f,
                                       const std::function<Complex(const Eigen::VectorXd&)>& test_ft,
                                       double tail_tolerance = 1e-8);

/// Seed-stable random series c(alpha) = u(alpha) * e^{-r |point(alpha)|^{1/s}}
/// over all dual indices with |point| <= radius, where u has modulus in
/// [0.5, 1) and uniform phase, drawn from xoshiro256++ in lexicographic
/// index order. r = 0 gives bounded coefficients, r < 0 growth.
FourierSeries make_gevrey_series(const LatticeBasis& basis, double s, double r, double radius,
                                 std::uint64_t seed);

}  // namespace latticeharm
