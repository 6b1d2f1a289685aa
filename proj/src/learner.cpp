/// @file  learner.cpp

#include <prefforge/learner.hpp>

#include <chrono>
#include <map>

#include <prefforge/elicitation.hpp>
#include <prefforge/error.hpp>

namespace prefforge {

std::vector<Violation> validate(const LearnConfig& cfg) {
	std::vector<Violation> out;
	if (!(cfg.error.val_error >= 0.0)) out.push_back({"$.val_error", "must be >= 0"});
	if (!(cfg.error.tie_epsilon >= 0.0)) out.push_back({"$.tie_epsilon", "must be >= 0"});
	if (!(cfg.measure_tolerance >= 0.0)) out.push_back({"$.measure_tolerance", "must be >= 0"});
	auto ga = validate(cfg.ga);
	auto part = validate(cfg.partition);
	out.insert(out.end(), ga.begin(), ga.end());
	out.insert(out.end(), part.begin(), part.end());
	return out;
}

namespace {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t round) {
	// splitmix64 over the combined words
	std::uint64_t z = base ^ (stream * 0x9E3779B97F4A7C15ULL) ^ (round * 0xBF58476D1CE4E5B9ULL);
	z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
	z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
	return z ^ (z >> 31);
}

/// Weights for the refined condition list that reproduce the previous
/// function as closely as possible: old conditions keep their blocks, each new
/// condition borrows the block of the old rule most of its examples fell into.
Genome carry_over(const ObjectiveFunction& previous, const std::vector<RuleCondition>& refined,
                  const ComparisonSet& set) {
	const std::size_t added = refined.size() - previous.rules.size();
	Genome out;
	for (std::size_t r = 0; r < added; ++r) {
		std::map<std::size_t, std::size_t> votes;
		for (const auto& c : set.comparisons) {
			for (const auto* sol : {&c.sol1, &c.sol2}) {
				if (refined[r].matches(sol->measures)) {
					++votes[previous.rule_for(sol->measures)];
				}
			}
		}
		std::size_t source = previous.rules.size() - 1;
		std::size_t most = 0;
		for (auto [rule, n] : votes) {
			if (n > most) {
				most = n;
				source = rule;
			}
		}
		const auto& w = previous.rules[source].weights;
		out.insert(out.end(), w.begin(), w.end());
	}
	const Genome old = encode(previous);
	out.insert(out.end(), old.begin(), old.end());
	return out;
}

}  // namespace

LearnResult learn_objective(const ComparisonSet& set, const LearnConfig& config) {
	const auto started = std::chrono::steady_clock::now();
	if (auto v = validate(config); !v.empty()) {
		throw InvalidInput(v.front().path + ": " + v.front().message);
	}
	if (auto v = validate(set); !v.empty()) {
		throw InvalidInput(v.front().path + ": " + v.front().message);
	}
	if (set.comparisons.empty()) {
		throw InvalidInput("cannot learn from an empty comparison set");
	}
	if (!set.fully_answered()) {
		throw InvalidInput("every comparison needs a preference before learning");
	}

	LearnResult result;
	LearnReport& report = result.report;
	report.comparisons = set.comparisons.size();
	report.consistency_flags = consistency_flags(set, config.measure_tolerance);

	auto search = [&](const std::vector<RuleCondition>& conditions, std::size_t round,
	                  std::span<const Genome> seeds) {
		GaConfig ga = config.ga;
		ga.seed = derive_seed(config.seed, 1, round);
		return search_weights(conditions, set, config.error, ga, seeds);
	};
	auto record = [&](std::size_t round, const SearchResult& r, bool accepted) {
		IterationRecord it;
		it.iteration = round;
		it.rules = r.function.rules.size();
		it.global_error = r.error.global_error;
		it.incompatible = r.error.incompatible;
		it.accepted = accepted;
		if (config.trace) {
			it.ga_trace = r.trace;
		}
		report.iterations.push_back(std::move(it));
	};

	std::vector<RuleCondition> conditions{RuleCondition{}};
	SearchResult current = search(conditions, 0, {});
	record(0, current, true);
	report.accepted_errors.push_back(current.error.global_error);

	std::size_t round = 0;
	while (true) {
		if (current.error.global_error == 0.0) {
			report.stop_reason = "perfect";
			break;
		}
		if (round >= config.max_depth) {
			report.stop_reason = "depth-cap";
			report.depth_cap_hit = true;
			break;
		}
		++round;
		PartitionConfig part = config.partition;
		part.seed = derive_seed(config.seed, 2, round);
		auto refined = refine_partitions(conditions, current.function, set, config.error, part);
		if (refined.size() == conditions.size()) {
			report.stop_reason = "no-partition";
			break;
		}
		const Genome seed_genome = carry_over(current.function, refined, set);
		SearchResult candidate = search(refined, round, std::span<const Genome>(&seed_genome, 1));
		const bool better = candidate.error.global_error < current.error.global_error;
		record(round, candidate, better);
		if (!better) {
			report.stop_reason = "no-improvement";
			break;
		}
		conditions = std::move(refined);
		current = std::move(candidate);
		report.accepted_errors.push_back(current.error.global_error);
	}

	result.function = current.function;
	report.final_error = current.error.global_error;
	report.final_incompatible = current.error.incompatible;
	report.wall_time_ms =
	    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
	return result;
}

}  // namespace prefforge
