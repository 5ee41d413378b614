#include "latticeharm/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "latticeharm/rng.hpp"

namespace latticeharm {

namespace {

double lq_reduce(const double* v, std::size_t n, double q, double h) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, v[i]);
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::pow(v[i], q);
    return std::pow(h * acc, 1.0 / q);
}

/// Nested reduction of a dense row-major tensor (last axis fastest). Stage
/// k reduces original axis spec.tau[k] with exponent spec.q[k]; stage_scale
/// is the rectangle-rule factor per stage (1 for sequence norms).
double mixed_fold(const std::vector<double>& values, const std::vector<std::size_t>& dims,
                  const MixedNormSpec& spec, const std::vector<double>& stage_scale) {
    const std::size_t d = dims.size();
    std::size_t total = 1;
    for (const auto n : dims) total *= n;
    if (total == 0) return 0.0;

    // row-major strides of the original layout
    std::vector<std::size_t> stride(d, 1);
    for (std::size_t k = d; k-- > 1;) stride[k - 1] = stride[k] * dims[k];

    // materialize the permuted layout with the stage-0 axis fastest
    std::vector<std::size_t> pd(d);
    for (std::size_t i = 0; i < d; ++i) pd[i] = dims[spec.tau[i]];
    std::vector<double> work(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat, orig = 0;
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t coord = rest % pd[i];
            rest /= pd[i];
            orig += coord * stride[spec.tau[i]];
        }
        work[flat] = values[orig];
    }

    std::size_t count = total;
    for (std::size_t stage = 0; stage < d; ++stage) {
        const std::size_t run = pd[stage];
        const std::size_t out = count / run;
        for (std::size_t t = 0; t < out; ++t) {
            work[t] = lq_reduce(&work[t * run], run, spec.q[stage], stage_scale[stage]);
        }
        count = out;
    }
    return work[0];
}

double conjugate_exponent(double q) {
    if (q == 1.0) return kInfExponent;
    if (std::isinf(q)) return 1.0;
    return q / (q - 1.0);
}

double lq_norm_values(const std::vector<double>& v, double q) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (const double x : v) m = std::max(m, x);
        return m;
    }
    double acc = 0.0;
    for (const double x : v) acc += std::pow(x, q);
    return std::pow(acc, 1.0 / q);
}

struct Box {
    IndexVec lo;
    std::vector<std::size_t> dims;
    std::size_t total = 0;
};

Box bounding_box(const std::map<IndexVec, Complex>& coeffs) {
    Box box;
    if (coeffs.empty()) return box;
    const std::size_t d = coeffs.begin()->first.size();
    box.lo = coeffs.begin()->first;
    IndexVec hi = box.lo;
    for (const auto& [alpha, c] : coeffs) {
        for (std::size_t k = 0; k < d; ++k) {
            box.lo[k] = std::min(box.lo[k], alpha[k]);
            hi[k] = std::max(hi[k], alpha[k]);
        }
    }
    box.dims.resize(d);
    box.total = 1;
    for (std::size_t k = 0; k < d; ++k) {
        box.dims[k] = static_cast<std::size_t>(hi[k] - box.lo[k] + 1);
        box.total *= box.dims[k];
    }
    return box;
}

}  // namespace

WeightSpec WeightSpec::polynomial(double t) {
    if (!std::isfinite(t)) throw ValidationError("polynomial weight needs finite t");
    WeightSpec w;
    w.kind_ = Kind::Polynomial;
    w.t_ = t;
    return w;
}

WeightSpec WeightSpec::sub_exponential(double r, double s) {
    if (!std::isfinite(r)) throw ValidationError("sub-exponential weight needs finite r");
    if (!(s >= 1.0)) {
        throw ValidationError(
            "sub-exponential weight needs s >= 1: e^{r|.|^{1/s}} with 1/s > 1 outgrows every "
            "e^{R|.|} and is not moderate");
    }
    WeightSpec w;
    w.kind_ = Kind::SubExponential;
    w.r_ = r;
    w.s_ = s;
    return w;
}

WeightSpec WeightSpec::product(std::vector<WeightSpec> factors) {
    if (factors.empty()) throw ValidationError("product weight needs at least one factor");
    WeightSpec w;
    w.kind_ = Kind::Product;
    w.factors_ = std::move(factors);
    return w;
}

double WeightSpec::eval_radial(double rho) const {
    switch (kind_) {
        case Kind::Polynomial:
            return std::pow(1.0 + rho * rho, 0.5 * t_);
        case Kind::SubExponential:
            return std::exp(r_ * std::pow(rho, 1.0 / s_));
        case Kind::Product: {
            double acc = 1.0;
            for (const auto& f : factors_) acc *= f.eval_radial(rho);
            return acc;
        }
    }
    return 1.0;
}

WeightSpec WeightSpec::companion() const {
    switch (kind_) {
        case Kind::Polynomial:
            return polynomial(std::abs(t_));
        case Kind::SubExponential:
            return sub_exponential(std::abs(r_), s_);
        case Kind::Product: {
            std::vector<WeightSpec> out;
            out.reserve(factors_.size());
            for (const auto& f : factors_) out.push_back(f.companion());
            return product(std::move(out));
        }
    }
    return polynomial(0.0);
}

double WeightSpec::moderate_constant() const {
    switch (kind_) {
        case Kind::Polynomial:
            return std::pow(2.0, 0.5 * std::abs(t_));  // Peetre
        case Kind::SubExponential:
            return 1.0;  // |x+y|^{1/s} <= |x|^{1/s} + |y|^{1/s} for s >= 1
        case Kind::Product: {
            double acc = 1.0;
            for (const auto& f : factors_) acc *= f.moderate_constant();
            return acc;
        }
    }
    return 1.0;
}

WeightSpec WeightSpec::inverse() const {
    switch (kind_) {
        case Kind::Polynomial:
            return polynomial(-t_);
        case Kind::SubExponential:
            return sub_exponential(-r_, s_);
        case Kind::Product: {
            std::vector<WeightSpec> out;
            out.reserve(factors_.size());
            for (const auto& f : factors_) out.push_back(f.inverse());
            return product(std::move(out));
        }
    }
    return polynomial(0.0);
}

ModerateReport moderate_check(const WeightSpec& omega, const WeightSpec& v, int dim, double radius,
                              std::size_t samples, std::uint64_t seed) {
    if (dim < 1) throw ValidationError("moderate_check needs dim >= 1");
    if (!(radius > 0.0)) throw ValidationError("moderate_check needs radius > 0");
    if (samples < 100) throw ValidationError("moderate_check needs at least 100 samples");

    Xoshiro256pp rng(seed);
    auto draw_in_ball = [&](Eigen::VectorXd& x) {
        for (;;) {
            for (int k = 0; k < dim; ++k) x[k] = rng.uniform(-radius, radius);
            if (x.norm() <= radius) return;
        }
    };

    Eigen::VectorXd x(dim), y(dim);
    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        draw_in_ball(x);
        draw_in_ball(y);
        const double ratio = omega.eval(x + y) / (omega.eval(x) * v.eval(y));
        worst = std::max(worst, ratio);
    }
    ModerateReport report;
    report.worst_constant = worst;
    report.ok = worst <= omega.moderate_constant() * 1.01;
    return report;
}

MixedNormSpec MixedNormSpec::uniform(int dim, double exponent) {
    MixedNormSpec spec;
    spec.q.assign(static_cast<std::size_t>(dim), exponent);
    spec.tau.resize(static_cast<std::size_t>(dim));
    std::iota(spec.tau.begin(), spec.tau.end(), std::size_t{0});
    return spec;
}

void MixedNormSpec::validate(int dim) const {
    const auto d = static_cast<std::size_t>(dim);
    if (q.size() != d || tau.size() != d) {
        throw ValidationError("mixed norm spec dimension mismatch");
    }
    for (const double qk : q) {
        if (!(qk > 0.0)) throw ValidationError("mixed norm exponents must be positive or inf");
    }
    std::vector<bool> seen(d, false);
    for (const auto a : tau) {
        if (a >= d || seen[a]) throw ValidationError("tau must be a permutation of the axes");
        seen[a] = true;
    }
}

double mixed_seq_norm(const std::map<IndexVec, Complex>& coeffs, const MixedNormSpec& spec) {
    if (coeffs.empty()) return 0.0;
    const auto d = static_cast<int>(coeffs.begin()->first.size());
    spec.validate(d);

    const Box box = bounding_box(coeffs);
    std::vector<double> values(box.total, 0.0);
    std::vector<std::size_t> stride(box.dims.size(), 1);
    for (std::size_t k = box.dims.size(); k-- > 1;) stride[k - 1] = stride[k] * box.dims[k];
    for (const auto& [alpha, c] : coeffs) {
        std::size_t flat = 0;
        for (std::size_t k = 0; k < box.dims.size(); ++k) {
            flat += static_cast<std::size_t>(alpha[k] - box.lo[k]) * stride[k];
        }
        values[flat] = std::abs(c);
    }
    const std::vector<double> ones(box.dims.size(), 1.0);
    return mixed_fold(values, box.dims, spec, ones);
}

double periodic_space_norm(const FourierSeries& f, const WeightSpec& omega,
                           const MixedNormSpec& spec) {
    std::map<IndexVec, Complex> weighted;
    for (const auto& [alpha, c] : f.coeffs()) {
        weighted.emplace(alpha, std::abs(c) * omega.eval_radial(f.dual().point_norm(alpha)));
    }
    return mixed_seq_norm(weighted, spec);
}

namespace {

/// |V_phi f| over the x-grid for every xi node; row-major xi tensor, with
/// an optional per-x slice writer for the W norm.
struct StftMagnitudes {
    std::vector<std::size_t> dims;
    std::vector<double> weight;    // omega on the xi nodes
    std::vector<double> max_over_x;
    std::size_t x_count = 0;
};

StftMagnitudes stft_magnitudes(const FourierSeries& f, const WeightSpec& omega,
                               const GaussianWindow& window, const StftGridSpec& grid,
                               std::vector<double>* per_x) {
    const int d = f.lattice().dim();
    const SampleGrid xg(f.lattice(), grid.x_points);
    const XiGrid xig(d, grid.xi_radius, grid.xi_spacing);

    std::vector<IndexVec> modes;
    std::vector<Eigen::VectorXd> points;
    std::vector<Complex> coeff;
    for (const auto& [alpha, c] : f.coeffs()) {
        modes.push_back(alpha);
        points.push_back(f.dual().point(alpha));
        coeff.push_back(c);
    }
    const std::size_t nmodes = modes.size();

    // exact phases e^{i<x_m, alpha>}
    std::vector<Complex> phases(xg.size() * nmodes);
    const auto n = static_cast<std::int64_t>(xg.points_per_axis());
    for (std::size_t ix = 0; ix < xg.size(); ++ix) {
        const IndexVec m = xg.coords(ix);
        for (std::size_t b = 0; b < nmodes; ++b) {
            std::int64_t k = 0;
            for (std::size_t a = 0; a < m.size(); ++a) k += m[a] * modes[b][a];
            std::int64_t rem = k % n;
            if (rem < 0) rem += n;
            const double arg = kTwoPi * static_cast<double>(rem) / static_cast<double>(n);
            phases[ix * nmodes + b] = Complex(std::cos(arg), std::sin(arg));
        }
    }

    StftMagnitudes out;
    out.dims.assign(static_cast<std::size_t>(d), static_cast<std::size_t>(2 * xig.half() + 1));
    out.weight.resize(xig.size());
    out.max_over_x.assign(xig.size(), 0.0);
    out.x_count = xg.size();
    if (per_x != nullptr) per_x->assign(xg.size() * xig.size(), 0.0);

    std::vector<Complex> amp(nmodes);
    for (std::size_t ixi = 0; ixi < xig.size(); ++ixi) {
        const Eigen::VectorXd xi = xig.node(ixi);
        out.weight[ixi] = omega.eval(xi);
        for (std::size_t b = 0; b < nmodes; ++b) {
            amp[b] = coeff[b] * window.fourier_radial((points[b] - xi).norm());
        }
        for (std::size_t ix = 0; ix < xg.size(); ++ix) {
            const Complex* row = &phases[ix * nmodes];
            Complex v(0.0, 0.0);
            for (std::size_t b = 0; b < nmodes; ++b) v += amp[b] * row[b];
            const double mag = std::abs(v);
            out.max_over_x[ixi] = std::max(out.max_over_x[ixi], mag);
            if (per_x != nullptr) (*per_x)[ix * xig.size() + ixi] = mag;
        }
    }
    return out;
}

std::vector<double> stage_scales(const MixedNormSpec& spec, double spacing) {
    std::vector<double> scales(spec.q.size(), spacing);
    return scales;
}

}  // namespace

double modulation_norm_M(const FourierSeries& f, const WeightSpec& omega,
                         const MixedNormSpec& spec, const GaussianWindow& window,
                         const StftGridSpec& grid) {
    spec.validate(f.lattice().dim());
    const StftMagnitudes mags = stft_magnitudes(f, omega, window, grid, nullptr);
    std::vector<double> values(mags.max_over_x.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = mags.max_over_x[i] * mags.weight[i];
    return mixed_fold(values, mags.dims, spec, stage_scales(spec, grid.xi_spacing));
}

double modulation_norm_W(const FourierSeries& f, const WeightSpec& omega,
                         const MixedNormSpec& spec, const GaussianWindow& window,
                         const StftGridSpec& grid) {
    spec.validate(f.lattice().dim());
    std::vector<double> per_x;
    const StftMagnitudes mags = stft_magnitudes(f, omega, window, grid, &per_x);
    const std::size_t xi_count = mags.max_over_x.size();
    const std::vector<double> scales = stage_scales(spec, grid.xi_spacing);

    double best = 0.0;
    std::vector<double> values(xi_count);
    for (std::size_t ix = 0; ix < mags.x_count; ++ix) {
        for (std::size_t i = 0; i < xi_count; ++i) {
            values[i] = per_x[ix * xi_count + i] * mags.weight[i];
        }
        best = std::max(best, mixed_fold(values, mags.dims, spec, scales));
    }
    return best;
}

DualityReport duality_gap(const FourierSeries& f, const FourierSeries& g, const WeightSpec& omega,
                          double q) {
    if (!(q >= 1.0)) throw ValidationError("duality exponent q must lie in [1, inf]");
    const double qp = conjugate_exponent(q);

    std::vector<double> fw, gw;
    fw.reserve(f.support_size());
    for (const auto& [alpha, c] : f.coeffs()) {
        fw.push_back(std::abs(c) * omega.eval_radial(f.dual().point_norm(alpha)));
    }
    gw.reserve(g.support_size());
    for (const auto& [alpha, c] : g.coeffs()) {
        gw.push_back(std::abs(c) / omega.eval_radial(g.dual().point_norm(alpha)));
    }

    DualityReport report;
    report.pairing = pairing_E(f, g, /*conjugate=*/false);
    report.bound = lq_norm_values(fw, q) * lq_norm_values(gw, qp);
    report.ratio = report.bound > 0.0 ? std::abs(report.pairing) / report.bound : 0.0;
    return report;
}

FourierSeries dual_witness(const FourierSeries& f, const WeightSpec& omega, double q) {
    if (f.empty()) throw ZeroSeries("dual_witness needs a nonzero series");
    if (!(q > 1.0) || std::isinf(q)) {
        throw ValidationError("dual_witness needs q in (1, inf)");
    }
    const double qp = conjugate_exponent(q);

    // scale-invariant construction: normalize |c * omega| by its maximum
    // before raising to q-1 so that large q cannot overflow
    double umax = 0.0;
    for (const auto& [alpha, c] : f.coeffs()) {
        umax = std::max(umax, std::abs(c) * omega.eval_radial(f.dual().point_norm(alpha)));
    }

    FourierSeries::CoeffMap witness;
    for (const auto& [alpha, c] : f.coeffs()) {
        const double w = omega.eval_radial(f.dual().point_norm(alpha));
        const double u = std::abs(c) * w / umax;
        const Complex conj_phase = std::conj(c / std::abs(c));
        witness.emplace(alpha, conj_phase * std::pow(u, q - 1.0) * w);
    }
    FourierSeries g(f.lattice(), std::move(witness));

    std::vector<double> gw;
    gw.reserve(g.support_size());
    for (const auto& [alpha, c] : g.coeffs()) {
        gw.push_back(std::abs(c) / omega.eval_radial(g.dual().point_norm(alpha)));
    }
    const double dual_norm = lq_norm_values(gw, qp);
    return g.scaled(Complex(1.0 / dual_norm, 0.0));
}

}  // namespace latticeharm
