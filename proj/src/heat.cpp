#include "latticeharm/heat.hpp"

#include <cmath>
#include <sstream>

namespace latticeharm {

FourierSeries evolve(const FourierSeries& f0, double t) {
    if (!std::isfinite(t)) throw ValidationError("evolution time must be finite");
    FourierSeries::CoeffMap out;
    for (const auto& [alpha, c] : f0.coeffs()) {
        const double rho2 = f0.dual().point(alpha).squaredNorm();
        const double log_mag = std::log(std::abs(c)) - rho2 * t;
        if (t < 0.0 && log_mag > std::log(1e300)) {
            std::ostringstream msg;
            msg << "backward flow t = " << t << " drives |c| to e^" << log_mag
                << " at |alpha|^2 = " << rho2;
            throw BackwardBlowup(msg.str());
        }
        out.emplace(alpha, c * std::exp(-rho2 * t));
    }
    return FourierSeries(f0.lattice(), std::move(out));
}

HeatTrajectory evolve_trajectory(const FourierSeries& f0, const std::vector<double>& times) {
    HeatTrajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    for (const double t : times) traj.states.push_back(evolve(f0, t));
    return traj;
}

RegularityReport smoothing_report(const FourierSeries& f0, double t,
                                  const ClassifyThresholds& thresholds) {
    return classify(evolve(f0, t), thresholds);
}

WellposednessReport wellposedness_check(const FourierSeries& f0, double planted_s,
                                        const std::vector<double>& time_grid,
                                        const ClassifyThresholds& thresholds,
                                        double s_tolerance) {
    if (!(planted_s >= 0.0)) throw ValidationError("planted s must be >= 0");
    WellposednessReport report;
    report.planted_s = planted_s;

    const bool input_trig =
        classify(f0, thresholds).model.variant == DecayClass::TrigPolynomial;

    for (const double t : time_grid) {
        WellposednessEntry entry;
        entry.t = t;
        try {
            entry.report = classify(evolve(f0, t), thresholds);
        } catch (const BackwardBlowup&) {
            entry.blowup = true;
            report.backward_growth = true;
            report.entries.push_back(entry);
            continue;
        }
        const auto variant = entry.report.model.variant;

        if (input_trig) {
            // finite support is invariant under the diagonal flow
            if (variant != DecayClass::TrigPolynomial) report.class_preserved = false;
        } else if (planted_s < 0.5) {
            if (variant != DecayClass::GevreyDecay) {
                report.class_preserved = false;
            } else {
                const double dev = std::abs(entry.report.model.s - planted_s);
                report.max_s_deviation = std::max(report.max_s_deviation, dev);
                if (dev > s_tolerance) report.class_preserved = false;
            }
        } else {
            // s >= 1/2: forward flow must smooth; backward times may leave
            // the decay class and are flagged rather than failed
            if (t >= 0.0) {
                if (variant != DecayClass::GevreyDecay) report.class_preserved = false;
            } else if (variant == DecayClass::GevreyGrowth ||
                       variant == DecayClass::PolyGrowth) {
                report.backward_growth = true;
            }
        }
        report.entries.push_back(entry);
    }
    return report;
}

}  // namespace latticeharm
