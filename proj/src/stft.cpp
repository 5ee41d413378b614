#include "latticeharm/stft.hpp"

#include <cmath>
#include <sstream>

#include "latticeharm/parallel.hpp"

namespace latticeharm {

namespace {

constexpr std::size_t kXiBlock = 512;

struct ModeTable {
    std::vector<IndexVec> index;
    std::vector<Eigen::VectorXd> point;
    std::vector<Complex> coeff;
};

ModeTable mode_table(const FourierSeries& f) {
    ModeTable t;
    t.index.reserve(f.support_size());
    t.point.reserve(f.support_size());
    t.coeff.reserve(f.support_size());
    for (const auto& [alpha, c] : f.coeffs()) {
        t.index.push_back(alpha);
        t.point.push_back(f.dual().point(alpha));
        t.coeff.push_back(c);
    }
    return t;
}

/// Exact phases e^{i<x_m, alpha>} = e^{2*pi*i*(m.alpha)/n} for every grid
/// node and mode; x-major layout.
std::vector<Complex> phase_table(const SampleGrid& grid, const std::vector<IndexVec>& modes) {
    const auto n = static_cast<std::int64_t>(grid.points_per_axis());
    std::vector<Complex> table(grid.size() * modes.size());
    for (std::size_t ix = 0; ix < grid.size(); ++ix) {
        const IndexVec m = grid.coords(ix);
        for (std::size_t b = 0; b < modes.size(); ++b) {
            std::int64_t k = 0;
            for (std::size_t a = 0; a < m.size(); ++a) k += m[a] * modes[b][a];
            std::int64_t rem = k % n;
            if (rem < 0) rem += n;
            const double arg = kTwoPi * static_cast<double>(rem) / static_cast<double>(n);
            table[ix * modes.size() + b] = Complex(std::cos(arg), std::sin(arg));
        }
    }
    return table;
}

struct SumL1 {
    Complex sum{0.0, 0.0};
    double l1 = 0.0;
    SumL1 operator+(const SumL1& o) const { return SumL1{sum + o.sum, l1 + o.l1}; }
};

}  // namespace

GaussianWindow::GaussianWindow(double sigma, int dim) : sigma_(sigma), dim_(dim) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("window sigma must be > 0");
    if (dim < 1) throw ValidationError("window dimension must be >= 1");
    // rectangle-rule check of the unit L^2 norm; the d-dimensional integral
    // factors into identical one-dimensional ones
    const double h = sigma_ / 16.0;
    const auto half = static_cast<int>(std::ceil(8.0 * sigma_ / h));
    const double amp = std::pow(kTwoPi / 2.0 * sigma_ * sigma_, -0.25);  // (pi s^2)^{-1/4}
    double quad1d = 0.0;
    for (int k = -half; k <= half; ++k) {
        const double x = static_cast<double>(k) * h;
        const double v = amp * std::exp(-x * x / (2.0 * sigma_ * sigma_));
        quad1d += v * v * h;
    }
    if (std::abs(std::pow(quad1d, dim_) - 1.0) > 1e-12) {
        throw ValidationError("window normalization check failed");
    }
}

double GaussianWindow::phi(const Eigen::VectorXd& x) const {
    const double amp = std::pow(kTwoPi / 2.0 * sigma_ * sigma_, -0.25 * dim_);
    return amp * std::exp(-x.squaredNorm() / (2.0 * sigma_ * sigma_));
}

double GaussianWindow::fourier_radial(double dist) const {
    const double amp = std::pow(sigma_ * sigma_ / (kTwoPi / 2.0), 0.25 * dim_);
    return amp * std::exp(-sigma_ * sigma_ * dist * dist / 2.0);
}

double GaussianWindow::fourier(const Eigen::VectorXd& xi) const {
    return fourier_radial(xi.norm());
}

double GaussianWindow::frequency_reach(double tol) const {
    return std::sqrt(2.0 * std::log(1.0 / tol)) / sigma_;
}

XiGrid::XiGrid(int dim, double radius, double spacing) : dim_(dim), spacing_(spacing) {
    if (dim < 1) throw ValidationError("xi grid dimension must be >= 1");
    if (!(radius >= 0.0) || !(spacing > 0.0)) {
        throw ValidationError("xi grid needs radius >= 0 and spacing > 0");
    }
    half_ = static_cast<int>(std::ceil(radius / spacing));
    count_ = 1;
    for (int k = 0; k < dim_; ++k) count_ *= static_cast<std::size_t>(2 * half_ + 1);
    cell_volume_ = std::pow(spacing_, dim_);
}

Eigen::VectorXd XiGrid::node(std::size_t flat) const {
    Eigen::VectorXd xi(dim_);
    const auto per_axis = static_cast<std::size_t>(2 * half_ + 1);
    for (int k = dim_ - 1; k >= 0; --k) {
        const auto idx = static_cast<std::int64_t>(flat % per_axis) - half_;
        xi[k] = static_cast<double>(idx) * spacing_;
        flat /= per_axis;
    }
    return xi;
}

StftGridSpec suggest_stft_grid(const FourierSeries& f, const FourierSeries* g,
                               const GaussianWindow& window, double tol) {
    std::int64_t max_coord = f.max_index_coord();
    double max_radius = f.max_mode_radius();
    if (g != nullptr) {
        max_coord = std::max(max_coord, g->max_index_coord());
        max_radius = std::max(max_radius, g->max_mode_radius());
    }
    StftGridSpec spec;
    spec.x_points = static_cast<int>(2 * max_coord + 1);
    spec.xi_radius = max_radius + window.frequency_reach(tol);
    spec.xi_spacing = 1.0 / (8.0 * window.sigma());
    return spec;
}

Complex stft_point(const FourierSeries& f, const GaussianWindow& window,
                   const Eigen::VectorXd& x, const Eigen::VectorXd& xi) {
    Complex acc(0.0, 0.0);
    for (const auto& [alpha, c] : f.coeffs()) {
        const Eigen::VectorXd p = f.dual().point(alpha);
        const double arg = p.dot(x);
        acc += c * window.fourier_radial((p - xi).norm()) * Complex(std::cos(arg), std::sin(arg));
    }
    const double arg = -x.dot(xi);
    return acc * Complex(std::cos(arg), std::sin(arg));
}

Complex stft_quadrature(const PeriodicSamples& samples, const GaussianWindow& window,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& xi, double truncation,
                        double tol) {
    const LatticeBasis& basis = samples.grid.basis();
    const int d = basis.dim();
    const int n = samples.grid.points_per_axis();
    const double sigma = window.sigma();

    if (truncation < sigma * std::sqrt(2.0 * std::log(1.0 / tol))) {
        std::ostringstream msg;
        msg << "truncation radius " << truncation << " does not cover the window mass at tol "
            << tol;
        throw TailTooLarge(msg.str());
    }
    double max_spacing = 0.0;
    for (int k = 0; k < d; ++k) {
        max_spacing = std::max(max_spacing, basis.matrix().col(k).norm() / n);
    }
    const double nyquist = kTwoPi / 2.0 / max_spacing;
    if (nyquist < xi.norm() + window.frequency_reach(tol)) {
        std::ostringstream msg;
        msg << "grid spacing " << max_spacing << " cannot resolve |xi| = " << xi.norm()
            << " plus the window bandwidth";
        throw NyquistViolation(msg.str());
    }

    // cover the ball |y - x| <= truncation with whole periodic cells
    const Eigen::MatrixXd inv = basis.matrix().inverse();
    const Eigen::VectorXd center = inv * x;
    std::vector<std::int64_t> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        const double b = inv.row(k).norm() * truncation;
        lo[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(std::floor(center[k] - b)) - 1;
        hi[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(std::floor(center[k] + b)) + 1;
    }

    const double w = samples.grid.weight();
    Complex acc(0.0, 0.0);
    IndexVec cell(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) cell[static_cast<std::size_t>(k)] = lo[static_cast<std::size_t>(k)];
    for (;;) {
        const Eigen::VectorXd shift = basis.point(cell);
        for (std::size_t i = 0; i < samples.grid.size(); ++i) {
            const Eigen::VectorXd y = samples.grid.node(i) + shift;
            const double window_part = window.phi(y - x);
            const double arg = -y.dot(xi);
            acc += samples.values[i] * window_part * Complex(std::cos(arg), std::sin(arg)) * w;
        }
        int axis = d - 1;
        while (axis >= 0) {
            auto a = static_cast<std::size_t>(axis);
            if (cell[a] < hi[a]) {
                ++cell[a];
                break;
            }
            cell[a] = lo[a];
            --axis;
        }
        if (axis < 0) break;
    }
    return acc * std::pow(kTwoPi, -0.5 * d);
}

Complex coefficient_via_stft(const FourierSeries& f, const GaussianWindow& window,
                             const IndexVec& alpha, const StftGridSpec& spec) {
    const ModeTable modes = mode_table(f);
    const SampleGrid xg(f.lattice(), spec.x_points);
    const XiGrid xig(f.lattice().dim(), spec.xi_radius, spec.xi_spacing);
    const Eigen::VectorXd alpha_point = f.dual().point(alpha);

    // phases for the support modes plus the queried alpha
    std::vector<IndexVec> phase_modes = modes.index;
    phase_modes.push_back(alpha);
    const std::vector<Complex> phases = phase_table(xg, phase_modes);
    const std::size_t stride = phase_modes.size();
    const std::size_t nmodes = modes.index.size();
    const double wx = xg.weight();

    // The x-phases of V_phi f and of e^{-i<x, alpha - xi>} share the factor
    // e^{-+i<x,xi>}, which cancels in the product; the quadrature below runs
    // over the remaining integrand.
    struct Acc {
        Complex sum{0.0, 0.0};
        Acc operator+(const Acc& o) const { return Acc{sum + o.sum}; }
    };
    const Acc total = block_reduce<Acc>(xig.size(), kXiBlock, [&](std::size_t b, std::size_t e) {
        Acc part;
        std::vector<Complex> amp(nmodes);
        for (std::size_t ixi = b; ixi < e; ++ixi) {
            const Eigen::VectorXd xi = xig.node(ixi);
            for (std::size_t m = 0; m < nmodes; ++m) {
                amp[m] = modes.coeff[m] * window.fourier_radial((modes.point[m] - xi).norm());
            }
            const double against_alpha = window.fourier_radial((alpha_point - xi).norm());
            Complex x_sum(0.0, 0.0);
            for (std::size_t ix = 0; ix < xg.size(); ++ix) {
                const Complex* row = &phases[ix * stride];
                Complex v(0.0, 0.0);
                for (std::size_t m = 0; m < nmodes; ++m) v += amp[m] * row[m];
                x_sum += v * std::conj(row[nmodes]);
            }
            part.sum += x_sum * against_alpha;
        }
        return part;
    });

    const double norm = wx * xig.cell_volume() /
                        (f.lattice().volume() * window.l2norm() * window.l2norm());
    return total.sum * norm;
}

ParsevalResult parseval_stft(const FourierSeries& f, const FourierSeries& g,
                             const GaussianWindow& window, const StftGridSpec& spec) {
    if (!f.lattice().same_as(g.lattice())) {
        throw LatticeMismatch("parseval_stft needs series on a shared lattice");
    }
    const ModeTable mf = mode_table(f);
    const ModeTable mg = mode_table(g);
    const SampleGrid xg(f.lattice(), spec.x_points);
    const XiGrid xig(f.lattice().dim(), spec.xi_radius, spec.xi_spacing);

    std::vector<IndexVec> phase_modes = mf.index;
    phase_modes.insert(phase_modes.end(), mg.index.begin(), mg.index.end());
    const std::vector<Complex> phases = phase_table(xg, phase_modes);
    const std::size_t stride = phase_modes.size();
    const std::size_t nf = mf.index.size();
    const std::size_t ng = mg.index.size();
    const double wx = xg.weight();

    const SumL1 total = block_reduce<SumL1>(xig.size(), kXiBlock, [&](std::size_t b, std::size_t e) {
        SumL1 part;
        std::vector<Complex> af(nf), ag(ng);
        for (std::size_t ixi = b; ixi < e; ++ixi) {
            const Eigen::VectorXd xi = xig.node(ixi);
            for (std::size_t m = 0; m < nf; ++m) {
                af[m] = mf.coeff[m] * window.fourier_radial((mf.point[m] - xi).norm());
            }
            for (std::size_t m = 0; m < ng; ++m) {
                ag[m] = mg.coeff[m] * window.fourier_radial((mg.point[m] - xi).norm());
            }
            Complex x_sum(0.0, 0.0);
            double l1 = 0.0;
            for (std::size_t ix = 0; ix < xg.size(); ++ix) {
                const Complex* row = &phases[ix * stride];
                Complex vf(0.0, 0.0);
                for (std::size_t m = 0; m < nf; ++m) vf += af[m] * row[m];
                Complex vg(0.0, 0.0);
                for (std::size_t m = 0; m < ng; ++m) vg += ag[m] * row[nf + m];
                const Complex prod = vf * std::conj(vg);
                x_sum += prod;
                l1 += std::abs(prod);
            }
            part.sum += x_sum;
            part.l1 += l1;
        }
        return part;
    });

    const double norm = wx * xig.cell_volume() /
                        (f.lattice().volume() * window.l2norm() * window.l2norm());
    return ParsevalResult{total.sum * norm, total.l1 * wx * xig.cell_volume()};
}

StftTable compute_stft_table(const FourierSeries& f, const GaussianWindow& window,
                             const StftGridSpec& spec) {
    SampleGrid xg(f.lattice(), spec.x_points);
    XiGrid xig(f.lattice().dim(), spec.xi_radius, spec.xi_spacing);
    std::vector<Complex> values(xg.size() * xig.size());
    for (std::size_t ix = 0; ix < xg.size(); ++ix) {
        const Eigen::VectorXd x = xg.node(ix);
        for (std::size_t ixi = 0; ixi < xig.size(); ++ixi) {
            values[ix * xig.size() + ixi] = stft_point(f, window, x, xig.node(ixi));
        }
    }
    return StftTable{std::move(xg), std::move(xig), std::move(values)};
}

std::vector<std::pair<double, double>> stft_xi_profile(const FourierSeries& f,
                                                       const GaussianWindow& window,
                                                       const StftGridSpec& spec) {
    const ModeTable modes = mode_table(f);
    const SampleGrid xg(f.lattice(), spec.x_points);
    const XiGrid xig(f.lattice().dim(), spec.xi_radius, spec.xi_spacing);
    const std::vector<Complex> phases = phase_table(xg, modes.index);
    const std::size_t nmodes = modes.index.size();

    std::vector<std::pair<double, double>> profile;
    profile.reserve(xig.size());
    std::vector<Complex> amp(nmodes);
    for (std::size_t ixi = 0; ixi < xig.size(); ++ixi) {
        const Eigen::VectorXd xi = xig.node(ixi);
        for (std::size_t m = 0; m < nmodes; ++m) {
            amp[m] = modes.coeff[m] * window.fourier_radial((modes.point[m] - xi).norm());
        }
        double best = 0.0;
        for (std::size_t ix = 0; ix < xg.size(); ++ix) {
            const Complex* row = &phases[ix * nmodes];
            Complex v(0.0, 0.0);
            for (std::size_t m = 0; m < nmodes; ++m) v += amp[m] * row[m];
            best = std::max(best, std::abs(v));
        }
        profile.emplace_back(xi.norm(), best);
    }
    return profile;
}

}  // namespace latticeharm
