#include "latticeharm/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace latticeharm {

namespace {

constexpr double kMagnitudeFloor = 1e-300;  // keep log() away from underflow noise

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;  // y = intercept - slope * x
    double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxx > 0.0 ? -sxy / sxx : 0.0;
    fit.intercept = my + fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double res = y[i] - (fit.intercept - fit.slope * x[i]);
        ss += res * res;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

double gevrey_residual(const std::vector<double>& radii, const std::vector<double>& logmag,
                       double s, LineFit* out = nullptr) {
    std::vector<double> x(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) x[i] = std::pow(radii[i], 1.0 / s);
    const LineFit fit = fit_line(x, logmag);
    if (out != nullptr) *out = fit;
    return fit.rms;
}

GevreyFit fit_shells(const std::vector<double>& radii, const std::vector<double>& logmag,
                     std::optional<double> s_fixed) {
    if (radii.size() < 8) {
        throw InsufficientSupport("Gevrey fit needs at least 8 shells with distinct |alpha|");
    }
    const auto [lo_it, hi_it] = std::minmax_element(logmag.begin(), logmag.end());
    if (*hi_it - *lo_it < 1e-12) {
        throw DegenerateFit("all shell medians agree; the Gevrey order is unidentifiable");
    }

    GevreyFit result;
    result.shells = radii.size();
    LineFit line;
    if (s_fixed.has_value()) {
        if (!(*s_fixed > 0.0)) throw ValidationError("Gevrey order s must be > 0");
        result.s = *s_fixed;
        result.residual = gevrey_residual(radii, logmag, result.s, &line);
    } else {
        // coarse scan over log-spaced s, then golden-section refinement
        constexpr double kLo = 0.1, kHi = 10.0;
        constexpr int kScan = 120;
        double best_s = kLo, best_e = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kScan; ++i) {
            const double s = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kScan - 1));
            const double e = gevrey_residual(radii, logmag, s);
            if (e < best_e) {
                best_e = e;
                best_s = s;
            }
        }
        const double step = std::pow(kHi / kLo, 1.0 / (kScan - 1));
        double a = std::log(std::max(kLo, best_s / step));
        double b = std::log(std::min(kHi, best_s * step));
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = gevrey_residual(radii, logmag, std::exp(c));
        double fd = gevrey_residual(radii, logmag, std::exp(d));
        for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = gevrey_residual(radii, logmag, std::exp(c));
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = gevrey_residual(radii, logmag, std::exp(d));
            }
        }
        result.s = std::exp(0.5 * (a + b));
        result.residual = gevrey_residual(radii, logmag, result.s, &line);
    }
    result.r = line.slope;
    result.logC = line.intercept;
    return result;
}

/// Per-shell medians of log magnitudes; radii grouped with 1e-9 relative
/// tolerance, origin and sub-floor magnitudes dropped.
void collect_shells(const std::vector<std::pair<double, double>>& points,
                    std::vector<double>& radii, std::vector<double>& logmag) {
    std::vector<std::pair<double, double>> kept;
    for (const auto& [rho, mag] : points) {
        if (rho <= 0.0 || !(mag >= kMagnitudeFloor)) continue;
        kept.emplace_back(rho, std::log(mag));
    }
    std::sort(kept.begin(), kept.end());
    std::size_t i = 0;
    while (i < kept.size()) {
        std::size_t j = i + 1;
        while (j < kept.size() && kept[j].first <= kept[i].first * (1.0 + 1e-9)) ++j;
        std::vector<double> vals;
        vals.reserve(j - i);
        for (std::size_t k = i; k < j; ++k) vals.push_back(kept[k].second);
        std::sort(vals.begin(), vals.end());
        const std::size_t m = vals.size();
        const double median = (m % 2 == 1) ? vals[m / 2] : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
        radii.push_back(kept[i].first);
        logmag.push_back(median);
        i = j;
    }
}

std::vector<std::pair<double, double>> series_points(const FourierSeries& series) {
    std::vector<std::pair<double, double>> points;
    points.reserve(series.support_size());
    for (const auto& [alpha, c] : series.coeffs()) {
        points.emplace_back(series.dual().point_norm(alpha), std::abs(c));
    }
    return points;
}

}  // namespace

const char* to_string(DecayClass c) {
    switch (c) {
        case DecayClass::TrigPolynomial: return "TrigPolynomial";
        case DecayClass::GevreyDecay: return "GevreyDecay";
        case DecayClass::GevreyGrowth: return "GevreyGrowth";
        case DecayClass::PolyDecay: return "PolyDecay";
        case DecayClass::PolyGrowth: return "PolyGrowth";
    }
    return "?";
}

GevreyFit fit_gevrey_profile(const std::vector<std::pair<double, double>>& shells,
                             std::optional<double> s) {
    std::vector<double> radii, logmag;
    collect_shells(shells, radii, logmag);
    return fit_shells(radii, logmag, s);
}

GevreyFit fit_gevrey(const FourierSeries& series, std::optional<double> s) {
    return fit_gevrey_profile(series_points(series), s);
}

RegularityReport classify(const FourierSeries& series, const ClassifyThresholds& thresholds) {
    if (series.empty()) throw ValidationError("classify needs a nonempty series");

    RegularityReport report;
    report.support = series.support_size();

    std::vector<double> radii, logmag;
    collect_shells(series_points(series), radii, logmag);
    if (radii.size() < thresholds.min_shells) {
        report.model.variant = DecayClass::TrigPolynomial;
        report.notes = "finite support below the fitting threshold";
        return report;
    }

    // polynomial competitor: log|c| = logC - N * log<alpha>
    std::vector<double> logbracket(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        logbracket[i] = 0.5 * std::log1p(radii[i] * radii[i]);
    }
    const LineFit poly = fit_line(logbracket, logmag);

    bool gevrey_ok = false;
    GevreyFit gf;
    try {
        gf = fit_shells(radii, logmag, std::nullopt);
        gevrey_ok = gf.residual < thresholds.residual_threshold && gf.residual <= poly.rms;
    } catch (const DegenerateFit&) {
        report.notes = "degenerate-fit";
    }

    if (gevrey_ok) {
        report.model.variant = gf.r >= 0.0 ? DecayClass::GevreyDecay : DecayClass::GevreyGrowth;
        report.model.s = gf.s;
        report.model.r = std::abs(gf.r);
        report.model.logC = gf.logC;
        report.residual = gf.residual;
    } else {
        report.model.variant = poly.slope >= 0.0 ? DecayClass::PolyDecay : DecayClass::PolyGrowth;
        report.model.N = std::abs(poly.slope);
        report.model.logC = poly.intercept;
        report.residual = poly.rms;
        if (poly.rms >= thresholds.residual_threshold) {
            if (!report.notes.empty()) report.notes += "; ";
            report.notes += "high residual";
        }
    }
    return report;
}

GevreyFit fit_stft_decay(const std::vector<std::pair<double, double>>& profile,
                         double bucket_width, std::optional<double> s) {
    if (!(bucket_width > 0.0)) throw ValidationError("bucket width must be > 0");
    // shell maxima per radius bucket
    std::map<std::int64_t, double> buckets;
    for (const auto& [rho, mag] : profile) {
        if (rho <= 0.0 || !(mag >= kMagnitudeFloor)) continue;
        const auto key = static_cast<std::int64_t>(std::llround(rho / bucket_width));
        if (key == 0) continue;
        auto [it, inserted] = buckets.emplace(key, mag);
        if (!inserted) it->second = std::max(it->second, mag);
    }
    std::vector<std::pair<double, double>> shells;
    shells.reserve(buckets.size());
    for (const auto& [key, mag] : buckets) {
        shells.emplace_back(static_cast<double>(key) * bucket_width, mag);
    }
    if (shells.size() < 8) {
        throw InsufficientSupport("STFT profile has fewer than 8 usable shells");
    }
    return fit_gevrey_profile(shells, s);
}

}  // namespace latticeharm
