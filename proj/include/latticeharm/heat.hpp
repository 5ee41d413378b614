#pragma once

#include <vector>

#include "latticeharm/regularity.hpp"
#include "latticeharm/series.hpp"

namespace latticeharm {

/// Spectral heat flow on the lattice torus: c(alpha) -> c(alpha) *
/// e^{-|point(alpha)|^2 t}. Backward flow (t < 0) is allowed but guarded:
/// throws BackwardBlowup when a resulting magnitude would exceed 1e300.
FourierSeries evolve(const FourierSeries& f0, double t);

struct HeatTrajectory {
    std::vector<double> times;
    std::vector<FourierSeries> states;
};

/// Evolves f0 over an increasing time grid. States share the support of f0
/// up to underflow pruning.
HeatTrajectory evolve_trajectory(const FourierSeries& f0, const std::vector<double>& times);

/// classify(evolve(f0, t)); for bounded data and t > 0 the expected model
/// is GevreyDecay with s near 1/2 and rate near t.
RegularityReport smoothing_report(const FourierSeries& f0, double t,
                                  const ClassifyThresholds& thresholds = {});

struct WellposednessEntry {
    double t = 0.0;
    bool blowup = false;  ///< backward flow exceeded the magnitude guard
    RegularityReport report;
};

struct WellposednessReport {
    double planted_s = 0.0;
    std::vector<WellposednessEntry> entries;
    /// For planted s < 1/2: classify stayed GevreyDecay with |s_hat - s|
    /// within tolerance at every grid time. For a trig-polynomial input:
    /// the class was preserved.
    bool class_preserved = true;
    /// Set when some backward time produced growth, a blowup, or lost the
    /// decay class (the expected picture at s = 1/2).
    bool backward_growth = false;
    double max_s_deviation = 0.0;
};

/// Checks the well-posedness picture of the heat example on a time grid:
/// for planted s < 1/2 the Gevrey class survives both flow directions
/// (1/s > 2 dominates the quadratic exponent); at s = 1/2 the forward flow
/// smooths while the backward flow is flagged.
WellposednessReport wellposedness_check(const FourierSeries& f0, double planted_s,
                                        const std::vector<double>& time_grid,
                                        const ClassifyThresholds& thresholds = {},
                                        double s_tolerance = 0.05);

}  // namespace latticeharm
