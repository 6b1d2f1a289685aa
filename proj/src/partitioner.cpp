/// @file  partitioner.cpp

#include <prefforge/partitioner.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>

#include "number_format.hpp"

namespace prefforge {

std::vector<Violation> validate(const PartitionConfig& cfg) {
	std::vector<Violation> out;
	if (cfg.min_rule_coverage < 1) {
		out.push_back({"$.partition.min_rule_coverage", "must be at least 1"});
	}
	if (cfg.max_clauses_per_rule < 1) {
		out.push_back({"$.partition.max_clauses_per_rule", "must be at least 1"});
	}
	if (!(cfg.prune_holdout_fraction > 0.0 && cfg.prune_holdout_fraction < 1.0)) {
		out.push_back({"$.partition.prune_holdout_fraction", "must lie in (0, 1)"});
	}
	return out;
}

std::vector<LabeledExample> label_solutions(const ObjectiveFunction& fn, const ComparisonSet& set,
                                            const ErrorConfig& cfg) {
	std::vector<LabeledExample> out;
	out.reserve(2 * set.comparisons.size());
	for (const auto& c : set.comparisons) {
		auto it = set.preferences.find(c.id);
		if (it == set.preferences.end()) {
			continue;
		}
		const Label label =
		    comp(c, fn, it->second, cfg.tie_epsilon) == 0 ? Label::Compatible : Label::Incompatible;
		out.push_back({c.sol1.measures, label});
		out.push_back({c.sol2.measures, label});
	}
	return out;
}

namespace {

struct Counts {
	std::size_t pos = 0;
	std::size_t neg = 0;
	std::size_t total() const { return pos + neg; }
};

/// Midpoint of (lo, hi], snapped to 6 decimals when that keeps it inside so
/// thresholds print cleanly.
double midpoint(double lo, double hi) {
	const double mid = lo + (hi - lo) / 2.0;
	const double snapped = std::round(mid * 1e6) / 1e6;
	return snapped > lo && snapped <= hi ? snapped : mid;
}

constexpr int kSplitAttempts = 3;

bool is_upper(Relation r) {
	return r == Relation::Less || r == Relation::LessEqual;
}

class Inducer {
public:
	Inducer(std::span<const LabeledExample> examples, Label positive, const PartitionConfig& cfg)
		: ex_(examples), positive_(positive), cfg_(cfg) {}

	bool is_pos(std::size_t i) const { return ex_[i].label == positive_; }

	Counts count(std::span<const std::size_t> idx, const RuleCondition& rule) const {
		Counts c;
		for (std::size_t i : idx) {
			if (rule.matches(ex_[i].measures)) {
				(is_pos(i) ? c.pos : c.neg)++;
			}
		}
		return c;
	}

	/// Adds the clause with the best FOIL information gain until the rule is
	/// pure or nothing gains. A clause bounding a measure on a side that is
	/// already bounded replaces the looser one, so at the clause limit the rule
	/// can still tighten its existing bounds.
	RuleCondition grow(std::vector<std::size_t> covered) const {
		RuleCondition rule;
		const std::size_t n_measures = ex_.empty() ? 0 : ex_.front().measures.size();
		auto same_bound = [](const Clause& a, const Clause& b) {
			return a.measure == b.measure && is_upper(a.relation) == is_upper(b.relation);
		};
		while (true) {
			Counts base;
			for (std::size_t i : covered) {
				(is_pos(i) ? base.pos : base.neg)++;
			}
			if (base.neg == 0 || base.pos == 0) {
				break;
			}
			const double base_info = std::log2(static_cast<double>(base.pos) / base.total());

			double best_gain = 0.0;
			std::optional<Clause> best;
			for (std::size_t m = 0; m < n_measures; ++m) {
				std::vector<std::size_t> sorted = covered;
				std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
					return ex_[a].measures[m] < ex_[b].measures[m];
				});
				std::size_t below_pos = 0;
				for (std::size_t k = 1; k < sorted.size(); ++k) {
					below_pos += is_pos(sorted[k - 1]) ? 1 : 0;
					const double lo = ex_[sorted[k - 1]].measures[m];
					const double hi = ex_[sorted[k]].measures[m];
					if (lo == hi) {
						continue;
					}
					const double t = midpoint(lo, hi);
					const Counts below{below_pos, k - below_pos};
					const Counts above{base.pos - below_pos, (sorted.size() - k) - (base.pos - below_pos)};
					for (auto [side, rel] : {std::pair{below, Relation::Less},
					                         std::pair{above, Relation::GreaterEqual}}) {
						if (side.pos == 0 || side.total() < cfg_.min_rule_coverage) {
							continue;
						}
						const Clause candidate{m, rel, t};
						const bool tightens = std::any_of(rule.clauses.begin(), rule.clauses.end(),
						                                  [&](const Clause& c) { return same_bound(c, candidate); });
						if (!tightens && rule.clauses.size() >= cfg_.max_clauses_per_rule) {
							continue;
						}
						const double gain =
						    side.pos * (std::log2(static_cast<double>(side.pos) / side.total()) - base_info);
						if (gain > best_gain + 1e-12) {
							best_gain = gain;
							best = candidate;
						}
					}
				}
			}
			if (!best) {
				break;
			}
			std::erase_if(rule.clauses, [&](const Clause& c) { return same_bound(c, *best); });
			rule.clauses.push_back(*best);
			std::erase_if(covered, [&](std::size_t i) { return !best->holds(ex_[i].measures); });
		}
		return rule;
	}

	/// Keeps the clause prefix that scores best, by (p - n) / (p + n), on the
	/// held-out set. Shorter prefixes win ties.
	RuleCondition prune(const RuleCondition& rule, std::span<const std::size_t> holdout) const {
		if (holdout.empty()) {
			return rule;
		}
		double best_score = -std::numeric_limits<double>::infinity();
		std::size_t best_len = rule.clauses.size();
		for (std::size_t len = 1; len <= rule.clauses.size(); ++len) {
			RuleCondition prefix;
			prefix.clauses.assign(rule.clauses.begin(), rule.clauses.begin() + static_cast<std::ptrdiff_t>(len));
			const Counts c = count(holdout, prefix);
			if (c.total() == 0) {
				continue;
			}
			const double score = (static_cast<double>(c.pos) - static_cast<double>(c.neg)) / c.total();
			if (score > best_score) {
				best_score = score;
				best_len = len;
			}
		}
		RuleCondition out;
		out.clauses.assign(rule.clauses.begin(), rule.clauses.begin() + static_cast<std::ptrdiff_t>(best_len));
		return out;
	}

	std::span<const LabeledExample> ex_;
	Label positive_;
	const PartitionConfig& cfg_;
};

}  // namespace

std::vector<RuleCondition> induce_rules(std::span<const LabeledExample> examples,
                                        const PartitionConfig& cfg) {
	std::vector<RuleCondition> rules;
	const auto n_incompatible = static_cast<std::size_t>(
	    std::count_if(examples.begin(), examples.end(),
	                  [](const LabeledExample& e) { return e.label == Label::Incompatible; }));
	const std::size_t n_compatible = examples.size() - n_incompatible;
	if (n_incompatible == 0 || n_compatible == 0 || cfg.max_rules == 0) {
		return {RuleCondition{}};
	}
	const Label positive = n_incompatible <= n_compatible ? Label::Incompatible : Label::Compatible;
	const Inducer inducer(examples, positive, cfg);

	std::vector<std::size_t> remaining(examples.size());
	std::iota(remaining.begin(), remaining.end(), 0);
	std::mt19937_64 rng(cfg.seed);

	while (rules.size() < cfg.max_rules) {
		std::vector<std::size_t> pos, neg;
		for (std::size_t i : remaining) {
			(inducer.is_pos(i) ? pos : neg).push_back(i);
		}
		if (pos.empty()) {
			break;
		}
		// Grow on a stratified split and prune on the rest; a rejected rule is
		// retried on up to kSplitAttempts fresh splits.
		auto attempt = [&]() -> std::optional<RuleCondition> {
			std::shuffle(pos.begin(), pos.end(), rng);
			std::shuffle(neg.begin(), neg.end(), rng);
			const auto holdout_count = [&](std::size_t n) {
				return static_cast<std::size_t>(std::floor(cfg.prune_holdout_fraction * n));
			};
			const std::size_t hp = holdout_count(pos.size());
			const std::size_t hn = holdout_count(neg.size());
			std::vector<std::size_t> holdout(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(hp));
			holdout.insert(holdout.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(hn));
			std::vector<std::size_t> grow_set(pos.begin() + static_cast<std::ptrdiff_t>(hp), pos.end());
			grow_set.insert(grow_set.end(), neg.begin() + static_cast<std::ptrdiff_t>(hn), neg.end());
			std::sort(holdout.begin(), holdout.end());
			std::sort(grow_set.begin(), grow_set.end());

			RuleCondition rule = inducer.grow(grow_set);
			if (rule.clauses.empty()) {
				return std::nullopt;
			}
			rule = inducer.prune(rule, holdout);

			// Accept only rules that beat the positive base rate on held-out
			// data and cover at least as many positives as negatives.
			const Counts held = inducer.count(holdout, rule);
			const Counts all = inducer.count(remaining, rule);
			const double base_rate = holdout.empty()
			                             ? static_cast<double>(pos.size()) / remaining.size()
			                             : static_cast<double>(hp) / holdout.size();
			const bool holdout_ok =
			    holdout.empty() || (held.pos > 0 && static_cast<double>(held.pos) / held.total() > base_rate &&
			                        held.pos >= held.neg);
			if (!holdout_ok || all.pos < all.neg) {
				return std::nullopt;
			}
			return rule;
		};
		std::optional<RuleCondition> accepted;
		for (int a = 0; a < kSplitAttempts && !accepted; ++a) {
			accepted = attempt();
		}
		if (!accepted) {
			break;
		}
		const RuleCondition rule = *accepted;
		rules.push_back(rule);
		std::erase_if(remaining, [&](std::size_t i) { return rule.matches(examples[i].measures); });
	}
	rules.push_back(RuleCondition{});
	return rules;
}

std::vector<RuleCondition> refine_partitions(std::span<const RuleCondition> current,
                                             const ObjectiveFunction& fn, const ComparisonSet& set,
                                             const ErrorConfig& error_cfg,
                                             const PartitionConfig& cfg) {
	std::vector<RuleCondition> out;
	if (cfg.max_rules > 0) {
		const auto examples = label_solutions(fn, set, error_cfg);
		for (auto& rule : induce_rules(examples, cfg)) {
			if (!rule.is_catch_all() &&
			    std::find(current.begin(), current.end(), rule) == current.end()) {
				out.push_back(std::move(rule));
			}
		}
	}
	out.insert(out.end(), current.begin(), current.end());
	return out;
}

void write_examples_csv(std::ostream& out, const MeasureSchema& schema,
                        std::span<const LabeledExample> examples) {
	for (const auto& m : schema.measures) {
		out << m.id << ',';
	}
	out << "label\n";
	for (const auto& e : examples) {
		for (double v : e.measures) {
			out << detail::format_number(v) << ',';
		}
		out << (e.label == Label::Incompatible ? "incompatible" : "compatible") << '\n';
	}
}

}  // namespace prefforge
