#pragma once

// Text file formats: trace CSV, transition-matrix / QUBO / config JSON,
// solver JSONL, trajectory and sweep CSV. CSV outputs may start with
// "# "-prefixed comment lines carrying the effective config; readers skip
// them.

#include "fcesched/classical.hpp"
#include "fcesched/eval.hpp"
#include "fcesched/qubo.hpp"
#include "fcesched/trace.hpp"
#include "fcesched/vqe.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fcesched {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] std::string read_text_file(const std::filesystem::path &path);
/// Writes through a temporary file and renames it into place.
void write_text_file(const std::filesystem::path &path, const std::string &contents);

/// "# config: {...}" line for CSV outputs.
[[nodiscard]] std::string config_comment(const Json &config);

// Trace CSV: t,v,g,fb_flag,vfb_label
[[nodiscard]] std::string trace_to_csv(const ConductanceTrace &trace, const Json &config = {});
/// Throws ParseError naming the line, EmptyInputError when there are no rows.
[[nodiscard]] ConductanceTrace trace_from_csv(const std::string &text);

// TransitionMatrix JSON: {levels: [...], w: [[...]]}
[[nodiscard]] Json transition_to_json(const TransitionMatrix &w);
[[nodiscard]] TransitionMatrix transition_from_json(const Json &j);

// QUBO JSON: {n_orders, z_levels, a, b, offset, linear, quadratic: [[i, j, c]]}
[[nodiscard]] Json qubo_to_json(const QuboProblem &q);
[[nodiscard]] QuboProblem qubo_from_json(const Json &j);

[[nodiscard]] Json sa_params_to_json(const SaParams &p);
[[nodiscard]] Json vqe_config_to_json(const VqeConfig &cfg);
/// Missing fields keep their defaults.
[[nodiscard]] VqeConfig vqe_config_from_json(const Json &j);

[[nodiscard]] Json schedule_to_json(const Schedule &s, const std::vector<double> &levels);

/// One JSON line per trial followed by a summary line.
[[nodiscard]] std::string solver_result_to_jsonl(const SolverResult &r, const QuboProblem &q,
                                                 const Json &summary_extra);

// Trajectory CSV: iteration,objective,best_energy_so_far
[[nodiscard]] std::string trajectory_to_csv(const std::vector<TrajectoryPoint> &points,
                                            const Json &config = {});

// Sweep CSV: backend,n,e_res_mean,e_res_std,s_max_mean,s_max_std,best_schedule,
//            trials,feasible_trials
[[nodiscard]] std::string sweep_to_csv(const std::vector<SweepRow> &rows, const Json &config = {});
[[nodiscard]] std::vector<SweepRow> sweep_from_csv(const std::string &text);
[[nodiscard]] Json sweep_to_json(const std::vector<SweepRow> &rows, const Json &config = {});

} // namespace fcesched
