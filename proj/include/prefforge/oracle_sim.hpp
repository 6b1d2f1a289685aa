/// @file  oracle_sim.hpp
/// @brief Simulated user answering comparisons from a hidden objective function,
///        and the closed loop elicit -> learn -> score on held-out comparisons.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <prefforge/comparison_generation.hpp>
#include <prefforge/learner.hpp>
#include <prefforge/measure_model.hpp>
#include <prefforge/objective_function.hpp>

namespace prefforge {

struct OracleConfig {
	ObjectiveFunction ground_truth;
	double tie_band = 0.5;
	double flip_probability = 0.0;
	std::uint64_t seed = 1;

	bool operator==(const OracleConfig&) const = default;
};

std::vector<Violation> validate(const OracleConfig& cfg);

/// Tie inside the band, otherwise the better solution; a non-tie verdict is
/// inverted with probability flip_probability. The flip draw depends only on
/// the seed and the comparison id.
/// @throws InvalidInput if the solutions do not fit the ground-truth schema.
Preference oracle_prefer(const OracleConfig& oracle, const Comparison& c);

struct SimulationConfig {
	GenerationConfig generation;
	std::size_t max_questions = 50;
	std::size_t test_comparisons = 50;
	/// Share of instances used for elicitation; the rest are held out.
	double train_fraction = 0.5;
	std::uint64_t seed = 1;

	bool operator==(const SimulationConfig&) const = default;
};

std::vector<Violation> validate(const SimulationConfig& cfg);

struct ClosedLoopReport {
	LearnResult learned;
	ComparisonSet train_set;  ///< the answered comparisons the learner saw
	ComparisonSet test_set;
	ErrorSummary train;
	ErrorSummary test;
	std::vector<std::string> consistency_flags;
	std::vector<std::string> session_log;
};

/// Splits @p instances into disjoint train/test groups, runs an elicitation
/// session on the train group answered by the oracle, learns, then scores the
/// learned function on fresh comparisons from the held-out group.
/// @throws InvalidInput if either group ends up without usable instances.
ClosedLoopReport run_closed_loop(const MeasureSchema& schema,
                                 std::span<const ProblemInstance> instances,
                                 const SimulationConfig& sim, const OracleConfig& oracle,
                                 const LearnConfig& learn);

}  // namespace prefforge
