/// @file  measure_model.hpp
/// @brief Data model shared by all modules: measures, solutions, instances,
///        comparisons and preferences.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <string>
#include <vector>

namespace prefforge {

/// One numeric descriptor of a solution.
struct Measure {
	std::string id;
	std::string label;

	bool operator==(const Measure&) const = default;
};

/// Ordered set of measures together with the global value bounds.
struct MeasureSchema {
	std::vector<Measure> measures;
	double val_min = 0.0;
	double val_max = 100.0;

	std::size_t size() const noexcept { return measures.size(); }

	/// Index of the measure with the given id, if any.
	std::optional<std::size_t> index_of(const std::string& id) const;

	bool operator==(const MeasureSchema&) const = default;
};

/// A candidate answer to one problem instance, already measured.
struct Solution {
	std::string id;
	std::string instance_id;
	std::vector<double> measures;
	/// Opaque rendering payload (SVG fragment, ...). Never parsed by the core.
	std::optional<std::string> display;

	bool operator==(const Solution&) const = default;
};

struct ProblemInstance {
	std::string id;
	std::string description;
	std::vector<Solution> solutions;

	bool operator==(const ProblemInstance&) const = default;
};

/// Two solutions of the same instance shown side by side.
struct Comparison {
	std::string id;
	Solution sol1;
	Solution sol2;

	bool operator==(const Comparison&) const = default;
};

enum class Verdict { PreferSol1, PreferSol2, Tie };

struct Preference {
	std::string comparison_id;
	Verdict verdict = Verdict::Tie;

	bool operator==(const Preference&) const = default;
};

/// The comparison sample, with a possibly partial map of answers.
struct ComparisonSet {
	MeasureSchema schema;
	std::vector<Comparison> comparisons;
	std::map<std::string, Verdict> preferences;

	const Comparison* find(const std::string& comparison_id) const;
	bool fully_answered() const;

	bool operator==(const ComparisonSet&) const = default;
};

/// One broken invariant, located by a JSON-style path.
struct Violation {
	std::string path;
	std::string message;

	bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate(const MeasureSchema& schema);
std::vector<Violation> validate(const MeasureSchema& schema, const Solution& sol,
                                const std::string& path);
std::vector<Violation> validate(const MeasureSchema& schema, const ProblemInstance& instance,
                                const std::string& path);

/// Checks every invariant of the set. Empty result iff the set is well formed.
std::vector<Violation> validate(const ComparisonSet& set);

/// Copy of @p set restricted to the comparisons that carry a preference.
ComparisonSet answered_subset(const ComparisonSet& set);

const char* to_string(Verdict v) noexcept;
std::optional<Verdict> parse_verdict(std::string_view text) noexcept;

}  // namespace prefforge
