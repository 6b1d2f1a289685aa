/// @file  partitioner.hpp
/// @brief Measure-space partitioning. Solutions are labelled by whether their
///        comparison agrees with the current function; threshold rules are then
///        induced for the minority label by grow-and-prune sequential covering
///        (the IREP scheme behind RIPPER) and become new rule conditions.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <prefforge/measure_model.hpp>
#include <prefforge/objective_function.hpp>

namespace prefforge {

enum class Label { Compatible, Incompatible };

struct LabeledExample {
	std::vector<double> measures;
	Label label = Label::Compatible;

	bool operator==(const LabeledExample&) const = default;
};

struct PartitionConfig {
	/// Minimum number of grow-set examples a rule must cover.
	std::size_t min_rule_coverage = 5;
	std::size_t max_clauses_per_rule = 2;
	std::size_t max_rules = 4;
	double prune_holdout_fraction = 1.0 / 3.0;
	std::uint64_t seed = 1;

	bool operator==(const PartitionConfig&) const = default;
};

std::vector<Violation> validate(const PartitionConfig& cfg);

/// Two examples per comparison, both labelled by the comparison's compatibility.
std::vector<LabeledExample> label_solutions(const ObjectiveFunction& fn, const ComparisonSet& set,
                                            const ErrorConfig& cfg);

/// Rules covering the minority label, in discovery order, followed by the
/// catch-all. Returns the catch-all alone when either label is missing or no
/// rule survives pruning. Induction stops once three fresh grow/prune splits
/// in a row yield no acceptable rule. While growing, a clause that narrows an
/// existing bound on the same measure replaces it.
std::vector<RuleCondition> induce_rules(std::span<const LabeledExample> examples,
                                        const PartitionConfig& cfg);

/// Induced rules for the region where @p fn disagrees with the preferences,
/// followed by @p current (whose catch-all therefore stays last).
std::vector<RuleCondition> refine_partitions(std::span<const RuleCondition> current,
                                             const ObjectiveFunction& fn, const ComparisonSet& set,
                                             const ErrorConfig& error_cfg,
                                             const PartitionConfig& cfg);

/// Debug dump: header of measure ids plus `label`, one row per example.
void write_examples_csv(std::ostream& out, const MeasureSchema& schema,
                        std::span<const LabeledExample> examples);

}  // namespace prefforge
