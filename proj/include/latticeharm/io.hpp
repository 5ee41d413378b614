#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "latticeharm/heat.hpp"
#include "latticeharm/regularity.hpp"
#include "latticeharm/series.hpp"
#include "latticeharm/spaces.hpp"
#include "latticeharm/stft.hpp"

namespace latticeharm {

/// Ordered JSON keeps the documented field order, which the byte-stable
/// output contract depends on.
using Json = nlohmann::ordered_json;

Json basis_to_json(const LatticeBasis& basis);
LatticeBasis basis_from_json(const Json& j);

Json series_to_json(const FourierSeries& series);
FourierSeries series_from_json(const Json& j);

Json samples_to_json(const PeriodicSamples& samples);
PeriodicSamples samples_from_json(const Json& j);

Json weight_to_json(const WeightSpec& weight);
WeightSpec weight_from_json(const Json& j);

Json report_to_json(const RegularityReport& report);
Json trajectory_to_json(const HeatTrajectory& trajectory);
Json stft_table_to_json(const GaussianWindow& window, const StftTable& table);

/// Serializes with fixed key order and %.17g formatting for floating-point
/// numbers, so identical values give identical bytes on every platform.
std::string dump_deterministic(const Json& j, int indent = 2);

Json load_json_file(const std::string& path);

}  // namespace latticeharm
