#ifndef CBS_IO_HPP
#define CBS_IO_HPP

#include <json.hpp>

#include <string>
#include <vector>

#include "cbs/analysis.hpp"
#include "cbs/continuum_kernels.hpp"
#include "cbs/simulator.hpp"

namespace cbs {

/** All CSV floats carry 17 significant digits so re-runs are byte-comparable. */
std::string format_double(double v);

/** Kernel tabulation as CSV rows (i, x, xi, k), channels 1..n+1. */
void write_kernels_csv(const std::string& path, const KernelsN& kn);

/** Trajectory as CSV rows (t, U, E). */
void write_trajectory_csv(const std::string& path, const Trajectory& tr);

/** Full-state snapshots nearest to the requested times as rows
 * (t, i, x, value); u channels are 1..n, the v channel is n+1. */
void write_snapshots_csv(const std::string& path, const Trajectory& tr,
                         const std::vector<double>& at_times);

/** Error curve as CSV rows (t, e). */
void write_error_curve_csv(const std::string& path, const std::vector<double>& times,
                           const std::vector<double>& e);

nlohmann::json to_json(const ResidualReport& r);
nlohmann::json to_json(const ContinuumResidualReport& r);
nlohmann::json to_json(const DeltaReport& r);
nlohmann::json to_json(const ParamErrorReport& r);
nlohmann::json to_json(const ControlDistance& d);
nlohmann::json to_json(const DecayFit& f);
nlohmann::json to_json(const ContinuumConstants& c);
nlohmann::json to_json(const Trajectory::Meta& m);

void write_json(const std::string& path, const nlohmann::json& j);

} // namespace cbs

#endif
