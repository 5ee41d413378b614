#pragma once

#include <optional>
#include <utility>

#include "latticeharm/series.hpp"

namespace latticeharm {

/// Unit L^2-norm Gaussian window
///   phi(x)     = (pi*sigma^2)^{-d/4} e^{-|x|^2 / (2 sigma^2)},
///   phi_hat(xi)= (sigma^2/pi)^{d/4}  e^{-sigma^2 |xi|^2 / 2}
/// with the (2*pi)^{-d/2} angular-frequency transform. Gaussians realize
/// the S^{1/2} window class the periodic STFT characterizations need.
class GaussianWindow {
public:
    GaussianWindow(double sigma, int dim);

    double sigma() const { return sigma_; }
    int dim() const { return dim_; }
    double l2norm() const { return 1.0; }

    double phi(const Eigen::VectorXd& x) const;
    double fourier(const Eigen::VectorXd& xi) const;
    double fourier_radial(double dist) const;

    /// Distance at which the frequency-side Gaussian falls below `tol`.
    double frequency_reach(double tol) const;

private:
    double sigma_;
    int dim_;
};

/// Axis-aligned frequency box {k*h : k in [-half, half]^d} covering the
/// ball |xi| <= radius used for xi-integrals; flattened lexicographically
/// (last axis fastest).
class XiGrid {
public:
    XiGrid(int dim, double radius, double spacing);

    int dim() const { return dim_; }
    double spacing() const { return spacing_; }
    int half() const { return half_; }
    std::size_t size() const { return count_; }
    double cell_volume() const { return cell_volume_; }
    Eigen::VectorXd node(std::size_t flat) const;

private:
    int dim_;
    double spacing_;
    int half_;
    std::size_t count_;
    double cell_volume_;
};

/// Discretization parameters for the STFT double integrals: rectangle rule
/// with x_points per axis over E, and a XiGrid of the given radius/spacing.
struct StftGridSpec {
    int x_points;
    double xi_radius;
    double xi_spacing;
};

/// Default grids per the Gaussian tail calculus: x at the Nyquist count of
/// the involved series, xi_radius = max mode radius + frequency reach at
/// `tol`, xi_spacing = 1/(8*sigma).
StftGridSpec suggest_stft_grid(const FourierSeries& f, const FourierSeries* g,
                               const GaussianWindow& window, double tol = 1e-9);

/// V_phi f(x, xi) by the periodic mode sum
///   e^{-i<x,xi>} sum_alpha c(f,alpha) conj(phi_hat(alpha - xi)) e^{i<x,alpha>},
/// exact for the finite coefficient map.
Complex stft_point(const FourierSeries& f, const GaussianWindow& window,
                   const Eigen::VectorXd& x, const Eigen::VectorXd& xi);

/// V_phi f(x, xi) = (2*pi)^{-d/2} \int f(y) conj(phi(y-x)) e^{-i<y,xi>} dy by
/// rectangle rule on the periodic extension of the samples, truncated to
/// |y - x| <= truncation. Throws TailTooLarge when the truncation radius
/// does not cover the window mass at the documented tolerance, and
/// NyquistViolation when the grid cannot resolve e^{-i<y,xi>} plus the
/// window bandwidth.
Complex stft_quadrature(const PeriodicSamples& samples, const GaussianWindow& window,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& xi, double truncation,
                        double tol = 1e-9);

/// Fourier coefficient recovered from the STFT:
///   c(f,alpha) = (||phi||^2 |E|)^{-1} \int_E \int V_phi f(x,xi)
///                phi_hat(alpha - xi) e^{-i<x, alpha - xi>} dxi dx.
Complex coefficient_via_stft(const FourierSeries& f, const GaussianWindow& window,
                             const IndexVec& alpha, const StftGridSpec& spec);

struct ParsevalResult {
    Complex value;
    double l1_mass = 0.0;  ///< quadrature of |V_phi f * conj(V_phi g)|
};

/// (f, g)_E = (||phi||^2 |E|)^{-1} \int_E \int V_phi f conj(V_phi g) dxi dx.
ParsevalResult parseval_stft(const FourierSeries& f, const FourierSeries& g,
                             const GaussianWindow& window, const StftGridSpec& spec);

/// Full STFT table for dumping: values flattened x-major, xi minor.
struct StftTable {
    SampleGrid x_grid;
    XiGrid xi_grid;
    std::vector<Complex> values;
};

StftTable compute_stft_table(const FourierSeries& f, const GaussianWindow& window,
                             const StftGridSpec& spec);

/// (|xi|, max over the x-grid of |V_phi f(x, xi)|) per xi node, the profile
/// the STFT-decay characterizations are fitted on.
std::vector<std::pair<double, double>> stft_xi_profile(const FourierSeries& f,
                                                       const GaussianWindow& window,
                                                       const StftGridSpec& spec);

}  // namespace latticeharm
