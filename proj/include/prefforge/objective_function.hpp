/// @file  objective_function.hpp
/// @brief Rule-based objective function: an ordered list of regression rules,
///        each a condition over measure values plus an integer-weighted mean.
///
/// Rules are evaluated first-match; the last rule is a catch-all with an empty
/// condition. The module also computes how well a function agrees with the
/// recorded preferences (compatibility, per-comparison error, global error).

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <string>
#include <vector>

#include <prefforge/measure_model.hpp>

namespace prefforge {

enum class Relation { Less, LessEqual, Greater, GreaterEqual };

/// `measure relation threshold`, e.g. `S_cv < 83`.
struct Clause {
	std::size_t measure = 0;  ///< index into the schema
	Relation relation = Relation::Less;
	double threshold = 0.0;

	bool holds(std::span<const double> values) const noexcept;

	bool operator==(const Clause&) const = default;
};

/// Conjunction of clauses; empty means "always true".
struct RuleCondition {
	std::vector<Clause> clauses;

	bool matches(std::span<const double> values) const noexcept;
	bool is_catch_all() const noexcept { return clauses.empty(); }

	bool operator==(const RuleCondition&) const = default;
};

struct RegressionRule {
	RuleCondition condition;
	std::vector<int> weights;

	bool operator==(const RegressionRule&) const = default;
};

struct ObjectiveFunction {
	MeasureSchema schema;
	std::vector<RegressionRule> rules;

	/// Index of the first rule whose condition holds. Assumes a catch-all tail.
	std::size_t rule_for(std::span<const double> values) const noexcept;

	bool operator==(const ObjectiveFunction&) const = default;
};

/// Parameters of the compatibility/error formulas.
struct ErrorConfig {
	/// Fixed penalty added to every incompatible comparison.
	double val_error = 40.0;
	/// Objective values closer than this count as equal.
	double tie_epsilon = 0.5;

	bool operator==(const ErrorConfig&) const = default;
};

struct ErrorSummary {
	double global_error = 0.0;
	std::size_t incompatible = 0;
	std::size_t comparisons = 0;
};

std::vector<Violation> validate(const ObjectiveFunction& fn);

/// Weighted mean of @p weights over @p values. Requires a positive weight sum.
double weighted_mean(std::span<const int> weights, std::span<const double> values) noexcept;

/// Quality of @p sol under the first matching rule.
/// @throws InvalidInput if the measure count differs from the schema.
double evaluate(const ObjectiveFunction& fn, const Solution& sol);

/// 0 when the verdict agrees with the two objective values, 1 otherwise.
int compatibility(double f1, double f2, Verdict verdict, double tie_epsilon) noexcept;
double comparison_error(double f1, double f2, Verdict verdict, const ErrorConfig& cfg) noexcept;

int comp(const Comparison& c, const ObjectiveFunction& fn, Verdict verdict, double tie_epsilon);
double error(const Comparison& c, const ObjectiveFunction& fn, Verdict verdict,
             const ErrorConfig& cfg);

/// Mean error over every comparison of @p set.
/// @throws InvalidInput on an empty set or an unanswered comparison.
ErrorSummary global_error(const ObjectiveFunction& fn, const ComparisonSet& set,
                          const ErrorConfig& cfg);

/// Human-readable rules, one line each:
/// `if (S_cv < 83) ⇒ S = (1/28)(6 × S_cv + 2 × S_el + ...)`.
std::string render_rules(const ObjectiveFunction& fn);

const char* to_string(Relation r) noexcept;
/// Accepts `<`, `<=`, `>`, `>=` and the symbols `≤`, `≥`.
bool parse_relation(std::string_view text, Relation& out) noexcept;

}  // namespace prefforge
