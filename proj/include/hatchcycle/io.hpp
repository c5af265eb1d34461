#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hatchcycle/equilibria.hpp"
#include "hatchcycle/hatch.hpp"
#include "hatchcycle/hopf.hpp"
#include "hatchcycle/model.hpp"
#include "hatchcycle/sim.hpp"
#include "hatchcycle/slowfast.hpp"
#include "hatchcycle/sweep.hpp"

// JSON documents mirror the type fields verbatim; malformed input raises ConfigError.

namespace hatchcycle::io {

using nlohmann::json;

json to_json(const HatchFunction& h);
HatchFunction hatch_from_json(const json& j);

json to_json(const ReducedParams& p);
ReducedParams reduced_from_json(const json& j);

json to_json(const StageParams& p);
StageParams stage_from_json(const json& j);

json to_json(const AssumptionReport& r);
json to_json(const OscillationMetrics& m);
json to_json(const SlowFastCycle& c);

json read_json_file(const std::string& path);

/// Compact fixed-precision number formatting shared by all CSV writers.
std::string fmt(double x);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_equilibria_csv(std::ostream& os, const std::vector<Equilibrium>& eqs);
void write_hopf_csv(std::ostream& os, const std::vector<HopfPoint>& points);
/// Closed cycle skeleton: columns segment, u, v.
void write_cycle_csv(std::ostream& os, const SlowFastCycle& cycle, const LimitPair& pair, std::size_t n = 512);
void write_sweep_csv(std::ostream& os, const std::vector<ArctanSweepRow>& rows);
void write_sweep_csv(std::ostream& os, const std::vector<HillSweepRow>& rows);

}  // namespace hatchcycle::io
