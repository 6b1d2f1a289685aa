/// @file  objective_function.cpp

#include <prefforge/objective_function.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include <prefforge/error.hpp>

#include "number_format.hpp"

namespace prefforge {

bool Clause::holds(std::span<const double> values) const noexcept {
	const double v = values[measure];
	switch (relation) {
	case Relation::Less: return v < threshold;
	case Relation::LessEqual: return v <= threshold;
	case Relation::Greater: return v > threshold;
	case Relation::GreaterEqual: return v >= threshold;
	}
	return false;
}

bool RuleCondition::matches(std::span<const double> values) const noexcept {
	return std::all_of(clauses.begin(), clauses.end(),
	                   [&](const Clause& c) { return c.holds(values); });
}

std::size_t ObjectiveFunction::rule_for(std::span<const double> values) const noexcept {
	for (std::size_t i = 0; i + 1 < rules.size(); ++i) {
		if (rules[i].condition.matches(values)) {
			return i;
		}
	}
	return rules.empty() ? 0 : rules.size() - 1;
}

std::vector<Violation> validate(const ObjectiveFunction& fn) {
	std::vector<Violation> out = validate(fn.schema);
	if (fn.rules.empty()) {
		out.push_back({"$.rules", "an objective function needs at least one rule"});
		return out;
	}
	if (!fn.rules.back().condition.is_catch_all()) {
		out.push_back({"$.rules[" + std::to_string(fn.rules.size() - 1) + "].condition",
		               "the last rule must have an empty (catch-all) condition"});
	}
	for (std::size_t r = 0; r < fn.rules.size(); ++r) {
		const auto& rule = fn.rules[r];
		const auto path = "$.rules[" + std::to_string(r) + "]";
		if (rule.weights.size() != fn.schema.size()) {
			out.push_back({path + ".weights", "expected one weight per measure"});
		} else {
			bool positive = false;
			for (std::size_t i = 0; i < rule.weights.size(); ++i) {
				if (rule.weights[i] < 0) {
					out.push_back({path + ".weights[" + std::to_string(i) + "]",
					               "weights must be non-negative"});
				}
				positive = positive || rule.weights[i] > 0;
			}
			if (!positive) {
				out.push_back({path + ".weights", "at least one weight must be positive"});
			}
		}
		for (std::size_t k = 0; k < rule.condition.clauses.size(); ++k) {
			const auto& cl = rule.condition.clauses[k];
			const auto cp = path + ".condition[" + std::to_string(k) + "]";
			if (cl.measure >= fn.schema.size()) {
				out.push_back({cp + ".measure", "unknown measure"});
			}
			if (!(cl.threshold >= fn.schema.val_min && cl.threshold <= fn.schema.val_max)) {
				out.push_back({cp + ".threshold", "threshold outside the schema bounds"});
			}
		}
	}
	return out;
}

double weighted_mean(std::span<const int> weights, std::span<const double> values) noexcept {
	double num = 0.0;
	long den = 0;
	for (std::size_t i = 0; i < weights.size(); ++i) {
		num += weights[i] * values[i];
		den += weights[i];
	}
	return num / static_cast<double>(den);
}

double evaluate(const ObjectiveFunction& fn, const Solution& sol) {
	if (sol.measures.size() != fn.schema.size()) {
		throw InvalidInput("solution '" + sol.id + "' has " +
		                   std::to_string(sol.measures.size()) + " measures, schema has " +
		                   std::to_string(fn.schema.size()));
	}
	if (fn.rules.empty()) {
		throw InvalidInput("objective function has no rules");
	}
	const auto& rule = fn.rules[fn.rule_for(sol.measures)];
	return weighted_mean(rule.weights, sol.measures);
}

int compatibility(double f1, double f2, Verdict verdict, double tie_epsilon) noexcept {
	switch (verdict) {
	case Verdict::Tie: return std::abs(f1 - f2) <= tie_epsilon ? 0 : 1;
	case Verdict::PreferSol1: return f1 > f2 + tie_epsilon ? 0 : 1;
	case Verdict::PreferSol2: return f2 > f1 + tie_epsilon ? 0 : 1;
	}
	return 1;
}

double comparison_error(double f1, double f2, Verdict verdict, const ErrorConfig& cfg) noexcept {
	if (compatibility(f1, f2, verdict, cfg.tie_epsilon) == 0) {
		return 0.0;
	}
	return cfg.val_error + std::abs(f1 - f2);
}

int comp(const Comparison& c, const ObjectiveFunction& fn, Verdict verdict, double tie_epsilon) {
	return compatibility(evaluate(fn, c.sol1), evaluate(fn, c.sol2), verdict, tie_epsilon);
}

double error(const Comparison& c, const ObjectiveFunction& fn, Verdict verdict,
             const ErrorConfig& cfg) {
	return comparison_error(evaluate(fn, c.sol1), evaluate(fn, c.sol2), verdict, cfg);
}

ErrorSummary global_error(const ObjectiveFunction& fn, const ComparisonSet& set,
                          const ErrorConfig& cfg) {
	if (set.comparisons.empty()) {
		throw InvalidInput("global error of an empty comparison set is undefined");
	}
	ErrorSummary out;
	double total = 0.0;
	for (const auto& c : set.comparisons) {
		auto it = set.preferences.find(c.id);
		if (it == set.preferences.end()) {
			throw InvalidInput("comparison '" + c.id + "' has no preference");
		}
		const double f1 = evaluate(fn, c.sol1);
		const double f2 = evaluate(fn, c.sol2);
		if (compatibility(f1, f2, it->second, cfg.tie_epsilon) != 0) {
			++out.incompatible;
			total += cfg.val_error + std::abs(f1 - f2);
		}
	}
	out.comparisons = set.comparisons.size();
	out.global_error = total / static_cast<double>(out.comparisons);
	return out;
}

const char* to_string(Relation r) noexcept {
	switch (r) {
	case Relation::Less: return "<";
	case Relation::LessEqual: return "<=";
	case Relation::Greater: return ">";
	case Relation::GreaterEqual: return ">=";
	}
	return "<";
}

bool parse_relation(std::string_view text, Relation& out) noexcept {
	if (text == "<") {
		out = Relation::Less;
	} else if (text == "<=" || text == "≤") {
		out = Relation::LessEqual;
	} else if (text == ">") {
		out = Relation::Greater;
	} else if (text == ">=" || text == "≥") {
		out = Relation::GreaterEqual;
	} else {
		return false;
	}
	return true;
}

namespace {

const char* symbol(Relation r) {
	switch (r) {
	case Relation::Less: return "<";
	case Relation::LessEqual: return "≤";
	case Relation::Greater: return ">";
	case Relation::GreaterEqual: return "≥";
	}
	return "<";
}

bool is_lower_bound(Relation r) {
	return r == Relation::Greater || r == Relation::GreaterEqual;
}

/// Range of one measure, with open or closed ends.
struct Interval {
	double lo = -std::numeric_limits<double>::infinity();
	bool lo_closed = false;
	double hi = std::numeric_limits<double>::infinity();
	bool hi_closed = false;

	bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }

	void intersect(const Clause& c) {
		switch (c.relation) {
		case Relation::Less:
			if (c.threshold <= hi) {
				hi_closed = false;
				hi = c.threshold;
			}
			break;
		case Relation::LessEqual:
			if (c.threshold < hi) {
				hi = c.threshold;
				hi_closed = true;
			}
			break;
		case Relation::Greater:
			if (c.threshold >= lo) {
				lo = c.threshold;
				lo_closed = false;
			}
			break;
		case Relation::GreaterEqual:
			if (c.threshold > lo) {
				lo = c.threshold;
				lo_closed = true;
			}
			break;
		}
	}
};

std::string render_clauses(const RuleCondition& cond, const MeasureSchema& schema) {
	// Group per measure so `83 ≤ S_cv` and `S_cv < 93` print as `83 ≤ S_cv < 93`.
	std::vector<std::size_t> order;
	for (const auto& c : cond.clauses) {
		if (std::find(order.begin(), order.end(), c.measure) == order.end()) {
			order.push_back(c.measure);
		}
	}
	std::string out;
	for (std::size_t m : order) {
		std::vector<const Clause*> mine;
		for (const auto& c : cond.clauses) {
			if (c.measure == m) {
				mine.push_back(&c);
			}
		}
		const std::string name =
		    m < schema.size() ? schema.measures[m].id : "m" + std::to_string(m);
		std::string part;
		if (mine.size() == 2 && is_lower_bound(mine[0]->relation) != is_lower_bound(mine[1]->relation)) {
			const Clause* lo = is_lower_bound(mine[0]->relation) ? mine[0] : mine[1];
			const Clause* hi = lo == mine[0] ? mine[1] : mine[0];
			part = detail::format_number(lo->threshold) +
			       (lo->relation == Relation::GreaterEqual ? " ≤ " : " < ") + name + " " +
			       symbol(hi->relation) + " " + detail::format_number(hi->threshold);
		} else {
			for (const Clause* c : mine) {
				if (!part.empty()) {
					part += " ∧ ";
				}
				part += name + " " + symbol(c->relation) + " " + detail::format_number(c->threshold);
			}
		}
		if (!out.empty()) {
			out += " ∧ ";
		}
		out += part;
	}
	return out;
}

// When every earlier rule constrains the same single measure, the catch-all
// covers the complement of their union; print that region when it is one interval.
std::optional<std::string> implied_region(const ObjectiveFunction& fn, std::size_t rule) {
	if (rule == 0) {
		return std::string("true");
	}
	std::optional<std::size_t> measure;
	std::vector<Interval> covered;
	for (std::size_t r = 0; r < rule; ++r) {
		const auto& clauses = fn.rules[r].condition.clauses;
		if (clauses.empty()) {
			return std::nullopt;
		}
		Interval iv;
		for (const auto& c : clauses) {
			if (measure && *measure != c.measure) {
				return std::nullopt;
			}
			measure = c.measure;
			iv.intersect(c);
		}
		if (!iv.empty()) {
			covered.push_back(iv);
		}
	}
	const double vmin = fn.schema.val_min;
	const double vmax = fn.schema.val_max;
	std::sort(covered.begin(), covered.end(), [](const Interval& a, const Interval& b) {
		return a.lo < b.lo || (a.lo == b.lo && a.lo_closed && !b.lo_closed);
	});
	std::vector<Interval> merged;
	for (const auto& iv : covered) {
		if (!merged.empty()) {
			auto& cur = merged.back();
			if (iv.lo < cur.hi || (iv.lo == cur.hi && (iv.lo_closed || cur.hi_closed))) {
				if (iv.hi > cur.hi || (iv.hi == cur.hi && iv.hi_closed)) {
					cur.hi = iv.hi;
					cur.hi_closed = iv.hi_closed;
				}
				continue;
			}
		}
		merged.push_back(iv);
	}
	std::vector<Interval> gaps;
	Interval next{vmin, true, vmax, true};
	for (const auto& iv : merged) {
		Interval gap{next.lo, next.lo_closed, iv.lo, !iv.lo_closed};
		if (gap.hi > vmax) {
			gap.hi = vmax;
			gap.hi_closed = true;
		}
		if (!gap.empty()) {
			gaps.push_back(gap);
		}
		if (iv.hi > next.lo || (iv.hi == next.lo && iv.hi_closed)) {
			next.lo = iv.hi;
			next.lo_closed = !iv.hi_closed;
		}
	}
	if (!next.empty() && next.lo <= vmax) {
		gaps.push_back(next);
	}
	if (gaps.size() != 1) {
		return std::nullopt;
	}
	const auto& g = gaps.front();
	const bool open_below = g.lo == vmin && g.lo_closed;
	const bool open_above = g.hi == vmax && g.hi_closed;
	if (open_below && open_above) {
		return std::string("true");
	}
	RuleCondition cond;
	if (!open_below) {
		cond.clauses.push_back({*measure, g.lo_closed ? Relation::GreaterEqual : Relation::Greater, g.lo});
	}
	if (!open_above) {
		cond.clauses.push_back({*measure, g.hi_closed ? Relation::LessEqual : Relation::Less, g.hi});
	}
	return render_clauses(cond, fn.schema);
}

}  // namespace

std::string render_rules(const ObjectiveFunction& fn) {
	std::ostringstream out;
	for (std::size_t r = 0; r < fn.rules.size(); ++r) {
		const auto& rule = fn.rules[r];
		std::optional<std::string> cond;
		if (rule.condition.is_catch_all()) {
			cond = implied_region(fn, r);
		} else {
			cond = render_clauses(rule.condition, fn.schema);
		}
		out << (cond ? "if (" + *cond + ")" : std::string("otherwise"));

		const int den = std::accumulate(rule.weights.begin(), rule.weights.end(), 0);
		out << " ⇒ S = (1/" << den << ")(";
		bool first = true;
		for (std::size_t i = 0; i < rule.weights.size(); ++i) {
			if (rule.weights[i] == 0) {
				continue;
			}
			if (!first) {
				out << " + ";
			}
			first = false;
			const std::string name =
			    i < fn.schema.size() ? fn.schema.measures[i].id : "m" + std::to_string(i);
			out << rule.weights[i] << " × " << name;
		}
		out << ")\n";
	}
	return out.str();
}

}  // namespace prefforge
