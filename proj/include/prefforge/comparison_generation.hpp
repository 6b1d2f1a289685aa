/// @file  comparison_generation.hpp
/// @brief Builds the comparison set from problem instances and synthesizes
///        instances for tests and simulations.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <prefforge/measure_model.hpp>

namespace prefforge {

/// How the measure vectors of a pair differ, given a tolerance.
enum class StructureKind { EqualVectors, OneMeasureDiffers, TwoMeasuresDiffer, Unconstrained };

/// Measures whose values differ by more than the tolerance, in schema order.
struct PairStructure {
	StructureKind kind = StructureKind::Unconstrained;
	std::vector<std::size_t> differing;
};

PairStructure classify_pair(std::span<const double> a, std::span<const double> b,
                            double measure_tolerance);

struct StructuredPairQuotas {
	std::size_t equal_vectors = 0;
	std::size_t one_measure_differs = 0;
	std::size_t two_measures_differ = 0;
	std::size_t unconstrained = 0;

	bool operator==(const StructuredPairQuotas&) const = default;
};

struct GenerationConfig {
	std::size_t max_instances = 100;
	std::size_t pairs_per_instance = 6;
	/// Per instance, pairs of each kind picked before the remaining slots are
	/// filled in pair order. Zero everywhere means plain pair order.
	StructuredPairQuotas structured_pair_quotas;
	double measure_tolerance = 1.0;
	std::uint64_t seed = 1;

	bool operator==(const GenerationConfig&) const = default;
};

struct TaggedComparison {
	std::string comparison_id;
	StructureKind kind;
};

struct GeneratedSet {
	ComparisonSet set;
	std::vector<TaggedComparison> tags;  ///< parallel to set.comparisons
	std::vector<std::string> warnings;
};

/// One comparison per selected unordered solution pair, preferences empty.
/// @throws InvalidInput when no instance has two or more solutions.
GeneratedSet generate_comparisons(const MeasureSchema& schema,
                                  std::span<const ProblemInstance> instances,
                                  const GenerationConfig& config);

/// Fraction of instances receiving each structured pair.
struct StructureMix {
	double equal = 0.0;
	double one_differs = 0.0;
	double two_differ = 0.0;
};

/// Random instances with values uniform in the schema bounds. A fraction of
/// them carries an equal-vector, a one-measure and a two-measure variant of a
/// base solution so every choice strategy has material.
std::vector<ProblemInstance> synthesize_instances(const MeasureSchema& schema,
                                                  std::size_t n_instances,
                                                  std::size_t solutions_per_instance,
                                                  const StructureMix& mix, std::uint64_t seed);

/// Solutions of one instance share a base profile and differ by an overall
/// quality shift, a trade-off shift and per-measure noise. The trade-off
/// moves measures along `tradeoff_direction`, as when improving one
/// constraint costs another; an empty direction means a random half of the
/// measures up and the rest down, drawn per instance. All spreads are
/// standard deviations and, like the base bounds, fractions of the schema
/// range.
struct GradedModel {
	double base_low = 0.2;
	double base_high = 0.8;
	double level_spread = 0.2;
	double tradeoff_spread = 0.0;
	std::vector<double> tradeoff_direction;
	double noise = 0.05;
};

/// Instances under @p model, values clamped to the bounds and rounded to 0.01.
/// @throws InvalidInput if a non-empty direction does not match the schema.
std::vector<ProblemInstance> synthesize_graded_instances(const MeasureSchema& schema,
                                                         std::size_t n_instances,
                                                         std::size_t solutions_per_instance,
                                                         const GradedModel& model, std::uint64_t seed);

const char* to_string(StructureKind k) noexcept;

}  // namespace prefforge
