#include "latticeharm/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "latticeharm/rng.hpp"

namespace latticeharm {

namespace {

/// e^{2*pi*i*k/n} with the argument reduced in exact integer arithmetic.
Complex unit_phase(std::int64_t k, std::int64_t n) {
    std::int64_t m = k % n;
    if (m < 0) m += n;
    const double arg = kTwoPi * static_cast<double>(m) / static_cast<double>(n);
    return Complex(std::cos(arg), std::sin(arg));
}

std::int64_t dot(const IndexVec& a, const IndexVec& b) {
    std::int64_t acc = 0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
    return acc;
}

void require_same_lattice(const FourierSeries& f, const FourierSeries& g) {
    if (!f.lattice().same_as(g.lattice())) {
        throw LatticeMismatch("series are defined on different lattices");
    }
}

}  // namespace

FourierSeries::FourierSeries(LatticeBasis lattice, CoeffMap coeffs)
    : lattice_(std::move(lattice)), dual_(dual_basis(lattice_)), coeffs_(std::move(coeffs)) {
    const auto d = static_cast<std::size_t>(lattice_.dim());
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->first.size() != d) {
            throw ValidationError("coefficient index dimension does not match lattice");
        }
        if (!std::isfinite(it->second.real()) || !std::isfinite(it->second.imag())) {
            throw ValidationError("coefficients must be finite");
        }
        if (it->second == Complex(0.0, 0.0)) {
            it = coeffs_.erase(it);
        } else {
            ++it;
        }
    }
}

Complex FourierSeries::at(const IndexVec& alpha) const {
    const auto it = coeffs_.find(alpha);
    return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

double FourierSeries::max_mode_radius() const {
    double r = 0.0;
    for (const auto& [alpha, c] : coeffs_) r = std::max(r, dual_.point_norm(alpha));
    return r;
}

std::int64_t FourierSeries::max_index_coord() const {
    std::int64_t m = 0;
    for (const auto& [alpha, c] : coeffs_) {
        for (const auto j : alpha) m = std::max(m, std::abs(j));
    }
    return m;
}

FourierSeries FourierSeries::scaled(Complex factor) const {
    CoeffMap out;
    for (const auto& [alpha, c] : coeffs_) out.emplace(alpha, factor * c);
    return FourierSeries(lattice_, std::move(out));
}

PeriodicSamples::PeriodicSamples(SampleGrid g, std::vector<Complex> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) {
        throw ValidationError("sample count does not match grid size");
    }
    for (const auto& z : values) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw ValidationError("samples must be finite");
        }
    }
}

FourierSeries analyze(const PeriodicSamples& samples, double max_radius) {
    const LatticeBasis& basis = samples.grid.basis();
    const int n = samples.grid.points_per_axis();
    const auto candidates = enumerate_dual_lattice(basis, max_radius);

    std::int64_t max_coord = 0;
    for (const auto& j : candidates) {
        for (const auto jk : j) max_coord = std::max(max_coord, std::abs(jk));
    }
    if (n <= 2 * max_coord) {
        std::ostringstream msg;
        msg << "grid resolution n = " << n << " does not resolve indices up to " << max_coord
            << " (need n > " << 2 * max_coord << ")";
        throw NyquistViolation(msg.str());
    }

    // c(alpha) = n^{-d} sum_m f(x_m) e^{-i<x_m, alpha>}; the phase
    // <x_m, alpha_j> = 2*pi*(m.j)/n is evaluated in integer arithmetic,
    // which makes the rule exact for band-limited trigonometric polynomials.
    const std::size_t count = samples.grid.size();
    const double inv_count = 1.0 / static_cast<double>(count);
    std::vector<IndexVec> node_coords(count);
    for (std::size_t i = 0; i < count; ++i) node_coords[i] = samples.grid.coords(i);

    FourierSeries::CoeffMap coeffs;
    for (const auto& j : candidates) {
        Complex acc(0.0, 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            acc += samples.values[i] * unit_phase(-dot(node_coords[i], j), n);
        }
        acc *= inv_count;
        if (acc != Complex(0.0, 0.0)) coeffs.emplace(j, acc);
    }
    return FourierSeries(basis, std::move(coeffs));
}

Complex synthesize_at(const FourierSeries& series, const Eigen::VectorXd& point) {
    Complex acc(0.0, 0.0);
    for (const auto& [alpha, c] : series.coeffs()) {
        const double arg = series.dual().point(alpha).dot(point);
        acc += c * Complex(std::cos(arg), std::sin(arg));
    }
    return acc;
}

std::vector<Complex> synthesize(const FourierSeries& series,
                                const std::vector<Eigen::VectorXd>& points) {
    std::vector<Complex> out;
    out.reserve(points.size());
    for (const auto& x : points) out.push_back(synthesize_at(series, x));
    return out;
}

PeriodicSamples synthesize_on_grid(const FourierSeries& series, int points_per_axis) {
    SampleGrid grid(series.lattice(), points_per_axis);
    const std::size_t count = grid.size();
    std::vector<Complex> values(count, Complex(0.0, 0.0));
    const auto n = static_cast<std::int64_t>(points_per_axis);
    for (std::size_t i = 0; i < count; ++i) {
        const IndexVec m = grid.coords(i);
        Complex acc(0.0, 0.0);
        for (const auto& [alpha, c] : series.coeffs()) acc += c * unit_phase(dot(m, alpha), n);
        values[i] = acc;
    }
    return PeriodicSamples(std::move(grid), std::move(values));
}

Complex pairing_E(const FourierSeries& f, const FourierSeries& g, bool conjugate) {
    require_same_lattice(f, g);
    Complex acc(0.0, 0.0);
    auto it_f = f.coeffs().begin();
    auto it_g = g.coeffs().begin();
    // merge over the union of supports in lexicographic order; terms with a
    // missing partner contribute zero and are skipped
    while (it_f != f.coeffs().end() && it_g != g.coeffs().end()) {
        if (it_f->first < it_g->first) {
            ++it_f;
        } else if (it_g->first < it_f->first) {
            ++it_g;
        } else {
            acc += conjugate ? it_f->second * std::conj(it_g->second)
                             : it_f->second * it_g->second;
            ++it_f;
            ++it_g;
        }
    }
    return acc;
}

double norm_E(const FourierSeries& f) {
    double acc = 0.0;
    for (const auto& [alpha, c] : f.coeffs()) acc += std::norm(c);
    return std::sqrt(acc);
}

DistributionAction distribution_action(
    const FourierSeries& f, const std::function<Complex(const Eigen::VectorXd&)>& test_ft,
    double tail_tolerance) {
    const int d = f.lattice().dim();
    const double factor = std::pow(kTwoPi, static_cast<double>(d) / 2.0);

    double max_radius = 0.0;
    for (const auto& [alpha, c] : f.coeffs()) {
        max_radius = std::max(max_radius, f.dual().point_norm(alpha));
    }

    Complex acc(0.0, 0.0);
    double tail = 0.0;
    for (const auto& [alpha, c] : f.coeffs()) {
        const Eigen::VectorXd p = f.dual().point(alpha);
        const Complex term = c * test_ft(-p);
        acc += term;
        if (max_radius > 0.0 && p.norm() >= max_radius * (1.0 - 1e-9)) {
            tail += std::abs(term) * factor;
        }
    }
    if (tail > tail_tolerance) {
        std::ostringstream msg;
        msg << "outermost-shell tail estimate " << tail << " exceeds tolerance " << tail_tolerance;
        throw TailTooLarge(msg.str());
    }
    return DistributionAction{factor * acc, tail};
}

FourierSeries make_gevrey_series(const LatticeBasis& basis, double s, double r, double radius,
                                 std::uint64_t seed) {
    if (s <= 0.0) throw ValidationError("generator needs s > 0");
    const auto indices = enumerate_dual_lattice(basis, radius);
    const DualBasis dual = dual_basis(basis);
    Xoshiro256pp rng(seed);

    FourierSeries::CoeffMap coeffs;
    for (const auto& j : indices) {
        const double modulus = 0.5 + 0.5 * rng.uniform01();
        const double phase = kTwoPi * rng.uniform01();
        const double rho = dual.point_norm(j);
        const double decay = std::exp(-r * std::pow(rho, 1.0 / s));
        const Complex c = modulus * decay * Complex(std::cos(phase), std::sin(phase));
        if (c != Complex(0.0, 0.0)) coeffs.emplace(j, c);
    }
    return FourierSeries(basis, std::move(coeffs));
}

}  // namespace latticeharm
