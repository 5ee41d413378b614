#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latticeharm/series.hpp"

namespace latticeharm {

enum class DecayClass {
    TrigPolynomial,  ///< finitely many modes, no decay model fitted
    GevreyDecay,     ///< |c(alpha)| ~ C e^{-r |alpha|^{1/s}}, r > 0
    GevreyGrowth,    ///< |c(alpha)| ~ C e^{+r |alpha|^{1/s}}, r > 0
    PolyDecay,       ///< |c(alpha)| ~ C <alpha>^{-N}
    PolyGrowth,      ///< |c(alpha)| ~ C <alpha>^{+N}
};

const char* to_string(DecayClass c);

/// Fitted decay/growth model. s, r, logC are meaningful for the Gevrey
/// variants, N and logC for the polynomial ones; TrigPolynomial carries no
/// parameters.
struct DecayModel {
    DecayClass variant = DecayClass::TrigPolynomial;
    double s = 0.0;
    double r = 0.0;
    double logC = 0.0;
    double N = 0.0;
};

struct RegularityReport {
    DecayModel model;
    double residual = 0.0;  ///< RMS of the log-magnitude fit
    std::size_t support = 0;
    std::string notes;
};

struct GevreyFit {
    double s = 0.0;
    double r = 0.0;  ///< positive = decay, negative = growth
    double logC = 0.0;
    double residual = 0.0;
    std::size_t shells = 0;
};

struct ClassifyThresholds {
    /// Below this many distinct |alpha| shells the series is reported as a
    /// trigonometric polynomial instead of fitted.
    std::size_t min_shells = 8;
    /// RMS log-residual below which the exponential family is accepted.
    double residual_threshold = 0.5;
};

/// Least-squares fit of log|c(alpha)| = logC - r * |alpha|^{1/s} on
/// per-shell medians of the log magnitudes (|alpha| = Euclidean norm of the
/// dual point; the origin and magnitudes below 1e-300 are excluded). When s
/// is not given it is found by a coarse scan plus golden-section search
/// over [0.1, 10] minimizing the RMS residual. Throws InsufficientSupport
/// with fewer than 8 shells and DegenerateFit when all shell medians agree.
GevreyFit fit_gevrey(const FourierSeries& series, std::optional<double> s = std::nullopt);

/// Same regression on a raw (radius, magnitude) profile, e.g. from
/// fit_stft_decay shells. Exposed for reuse on non-coefficient data.
GevreyFit fit_gevrey_profile(const std::vector<std::pair<double, double>>& shells,
                             std::optional<double> s = std::nullopt);

/// Decision tree: few shells => TrigPolynomial; otherwise the free-s Gevrey
/// fit competes with a log-log polynomial fit, and the exponential family
/// wins only when its residual is below the threshold and not worse than
/// the polynomial one.
RegularityReport classify(const FourierSeries& series, const ClassifyThresholds& thresholds = {});

/// Gevrey regression on an STFT magnitude profile: entries (|xi|, value)
/// are bucketed into shells of width `bucket_width`, the per-shell maximum
/// is taken, and the coefficient-fit machinery runs on the result. Throws
/// InsufficientSupport when fewer than 8 nonzero shells remain.
GevreyFit fit_stft_decay(const std::vector<std::pair<double, double>>& profile,
                         double bucket_width, std::optional<double> s = std::nullopt);

}  // namespace latticeharm
