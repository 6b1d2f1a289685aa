/// @file  weight_search.hpp
/// @brief Genetic search for the integer weights that minimise the global error
///        of a rule-based objective function with fixed rule conditions.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <prefforge/measure_model.hpp>
#include <prefforge/objective_function.hpp>

namespace prefforge {

struct GaConfig {
	std::size_t population_size = 60;
	std::size_t generations = 300;
	double mutation_rate = 0.1;   ///< per gene
	double crossover_rate = 0.9;  ///< per offspring; otherwise the first parent is copied
	std::size_t elitism_count = 2;
	std::size_t tournament_size = 3;
	int weight_min = 0;
	int weight_max = 10;
	bool early_stop = false;  ///< stop as soon as the global error reaches 0
	/// After the run, try the rounded mean of all genomes tied at the best
	/// error and keep it if it is no worse.
	bool consensus = true;
	std::uint64_t seed = 1;

	bool operator==(const GaConfig&) const = default;
};

std::vector<Violation> validate(const GaConfig& cfg);

/// Concatenated weight blocks, one block of |M| genes per rule.
using Genome = std::vector<int>;

struct SearchResult {
	ObjectiveFunction function;
	ErrorSummary error;
	/// Best global error after each generation (index 0 is the initial population).
	std::vector<double> trace;
	Genome genome;
};

/// Finds weights for @p conditions (the last one must be the catch-all) that
/// minimise the global error over @p set. @p seeds are injected into the
/// initial population next to the all-ones genome; seeds of the wrong length
/// are ignored.
/// @throws InvalidInput on unanswered comparisons, an empty set, or a
///         condition list without a catch-all tail.
SearchResult search_weights(std::span<const RuleCondition> conditions, const ComparisonSet& set,
                            const ErrorConfig& error_cfg, const GaConfig& ga_cfg,
                            std::span<const Genome> seeds = {});

/// Builds an objective function from conditions and a genome.
ObjectiveFunction decode(const MeasureSchema& schema, std::span<const RuleCondition> conditions,
                         const Genome& genome);

/// Concatenates the weight blocks of @p fn.
Genome encode(const ObjectiveFunction& fn);

}  // namespace prefforge
