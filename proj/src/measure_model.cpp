/// @file  measure_model.cpp

#include <prefforge/measure_model.hpp>

#include <set>

#include "number_format.hpp"

namespace prefforge {

std::optional<std::size_t> MeasureSchema::index_of(const std::string& id) const {
	for (std::size_t i = 0; i < measures.size(); ++i) {
		if (measures[i].id == id) {
			return i;
		}
	}
	return std::nullopt;
}

const Comparison* ComparisonSet::find(const std::string& comparison_id) const {
	for (const auto& c : comparisons) {
		if (c.id == comparison_id) {
			return &c;
		}
	}
	return nullptr;
}

bool ComparisonSet::fully_answered() const {
	for (const auto& c : comparisons) {
		if (!preferences.contains(c.id)) {
			return false;
		}
	}
	return true;
}

std::vector<Violation> validate(const MeasureSchema& schema) {
	std::vector<Violation> out;
	if (schema.measures.empty()) {
		out.push_back({"$.schema.measures", "schema needs at least one measure"});
	}
	std::set<std::string> seen;
	for (std::size_t i = 0; i < schema.measures.size(); ++i) {
		const auto& id = schema.measures[i].id;
		const auto path = "$.schema.measures[" + std::to_string(i) + "].id";
		if (id.empty()) {
			out.push_back({path, "measure id is empty"});
		} else if (!seen.insert(id).second) {
			out.push_back({path, "duplicate measure id '" + id + "'"});
		}
	}
	if (!(schema.val_min < schema.val_max)) {
		out.push_back({"$.schema", "val_min must be strictly below val_max"});
	}
	return out;
}

std::vector<Violation> validate(const MeasureSchema& schema, const Solution& sol,
                                const std::string& path) {
	std::vector<Violation> out;
	if (sol.measures.size() != schema.size()) {
		out.push_back({path + ".measures", "expected " + std::to_string(schema.size()) +
		                                       " measure values, got " +
		                                       std::to_string(sol.measures.size())});
		return out;
	}
	for (std::size_t i = 0; i < sol.measures.size(); ++i) {
		const double v = sol.measures[i];
		if (!(v >= schema.val_min && v <= schema.val_max)) {
			out.push_back({path + ".measures[" + std::to_string(i) + "]",
			               "value " + detail::format_number(v) + " outside [" +
			                   detail::format_number(schema.val_min) + ", " +
			                   detail::format_number(schema.val_max) + "]"});
		}
	}
	return out;
}

std::vector<Violation> validate(const MeasureSchema& schema, const ProblemInstance& instance,
                                const std::string& path) {
	std::vector<Violation> out;
	if (instance.solutions.size() < 2) {
		out.push_back({path + ".solutions", "an instance needs at least two solutions"});
	}
	for (std::size_t i = 0; i < instance.solutions.size(); ++i) {
		const auto sp = path + ".solutions[" + std::to_string(i) + "]";
		const auto& sol = instance.solutions[i];
		if (sol.instance_id != instance.id) {
			out.push_back({sp + ".instance_id", "solution belongs to instance '" +
			                                        sol.instance_id + "', not '" +
			                                        instance.id + "'"});
		}
		auto v = validate(schema, sol, sp);
		out.insert(out.end(), v.begin(), v.end());
	}
	return out;
}

std::vector<Violation> validate(const ComparisonSet& set) {
	std::vector<Violation> out = validate(set.schema);
	std::set<std::string> ids;
	for (std::size_t i = 0; i < set.comparisons.size(); ++i) {
		const auto& c = set.comparisons[i];
		const auto path = "$.comparisons[" + std::to_string(i) + "]";
		if (!ids.insert(c.id).second) {
			out.push_back({path + ".id", "duplicate comparison id '" + c.id + "'"});
		}
		if (c.sol1.id == c.sol2.id) {
			out.push_back({path, "sol1 and sol2 share the id '" + c.sol1.id + "'"});
		}
		if (c.sol1.instance_id != c.sol2.instance_id) {
			out.push_back({path, "sol1 and sol2 belong to different instances"});
		}
		for (auto [sol, name] : {std::pair{&c.sol1, ".sol1"}, std::pair{&c.sol2, ".sol2"}}) {
			auto v = validate(set.schema, *sol, path + name);
			out.insert(out.end(), v.begin(), v.end());
		}
	}
	for (const auto& [id, verdict] : set.preferences) {
		if (!ids.contains(id)) {
			out.push_back({"$.preferences." + id, "preference for unknown comparison"});
		}
	}
	return out;
}

ComparisonSet answered_subset(const ComparisonSet& set) {
	ComparisonSet out;
	out.schema = set.schema;
	for (const auto& c : set.comparisons) {
		if (auto it = set.preferences.find(c.id); it != set.preferences.end()) {
			out.comparisons.push_back(c);
			out.preferences.emplace(it->first, it->second);
		}
	}
	return out;
}

const char* to_string(Verdict v) noexcept {
	switch (v) {
	case Verdict::PreferSol1: return "PREFER_SOL1";
	case Verdict::PreferSol2: return "PREFER_SOL2";
	case Verdict::Tie: return "TIE";
	}
	return "TIE";
}

std::optional<Verdict> parse_verdict(std::string_view text) noexcept {
	if (text == "PREFER_SOL1") return Verdict::PreferSol1;
	if (text == "PREFER_SOL2") return Verdict::PreferSol2;
	if (text == "TIE") return Verdict::Tie;
	return std::nullopt;
}

}  // namespace prefforge
