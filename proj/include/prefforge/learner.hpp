/// @file  learner.hpp
/// @brief Learns an objective function from answered comparisons: weight
///        search, then repeated partition + joint re-search while it helps.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <prefforge/measure_model.hpp>
#include <prefforge/objective_function.hpp>
#include <prefforge/partitioner.hpp>
#include <prefforge/weight_search.hpp>

namespace prefforge {

struct LearnConfig {
	ErrorConfig error;
	GaConfig ga;
	PartitionConfig partition;
	/// Tolerance used when flagging equal-vector pairs answered with a preference.
	double measure_tolerance = 1.0;
	/// Refinement rounds allowed before the loop is cut short.
	std::size_t max_depth = 5;
	/// Base seed; each weight search and partitioning round derives its own.
	std::uint64_t seed = 1;
	/// Keep each weight search's per-generation trace in the report.
	bool trace = false;

	bool operator==(const LearnConfig&) const = default;
};

std::vector<Violation> validate(const LearnConfig& cfg);

struct IterationRecord {
	std::size_t iteration = 0;
	std::size_t rules = 0;
	double global_error = 0.0;
	std::size_t incompatible = 0;
	bool accepted = false;
	std::vector<double> ga_trace;

	bool operator==(const IterationRecord&) const = default;
};

struct LearnReport {
	std::vector<IterationRecord> iterations;
	/// Global error of every function that was kept, in order.
	std::vector<double> accepted_errors;
	double final_error = 0.0;
	std::size_t final_incompatible = 0;
	std::size_t comparisons = 0;
	std::vector<std::string> consistency_flags;
	/// One of: perfect, no-partition, no-improvement, depth-cap.
	std::string stop_reason;
	bool depth_cap_hit = false;
	/// Wall-clock duration. Left empty when byte-stable output is wanted.
	std::optional<double> wall_time_ms;

	bool operator==(const LearnReport&) const = default;
};

struct LearnResult {
	ObjectiveFunction function;
	LearnReport report;
};

/// @throws InvalidInput when a comparison is unanswered or the set is empty
///         or malformed.
LearnResult learn_objective(const ComparisonSet& set, const LearnConfig& config);

}  // namespace prefforge
