/// @file  weight_search.cpp

#include <prefforge/weight_search.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <numeric>
#include <random>

#include <prefforge/error.hpp>

namespace prefforge {

std::vector<Violation> validate(const GaConfig& cfg) {
	std::vector<Violation> out;
	if (cfg.population_size < 2) out.push_back({"$.ga.population_size", "must be at least 2"});
	if (cfg.generations < 1) out.push_back({"$.ga.generations", "must be at least 1"});
	if (!(cfg.mutation_rate >= 0.0 && cfg.mutation_rate <= 1.0)) {
		out.push_back({"$.ga.mutation_rate", "must lie in [0, 1]"});
	}
	if (!(cfg.crossover_rate >= 0.0 && cfg.crossover_rate <= 1.0)) {
		out.push_back({"$.ga.crossover_rate", "must lie in [0, 1]"});
	}
	if (cfg.elitism_count >= cfg.population_size) {
		out.push_back({"$.ga.elitism_count", "must be below population_size"});
	}
	if (cfg.tournament_size < 2) out.push_back({"$.ga.tournament_size", "must be at least 2"});
	if (cfg.weight_min < 0 || cfg.weight_max < 1 || cfg.weight_min > cfg.weight_max) {
		out.push_back({"$.ga", "weight range must satisfy 0 <= weight_min <= weight_max, weight_max >= 1"});
	}
	return out;
}

ObjectiveFunction decode(const MeasureSchema& schema, std::span<const RuleCondition> conditions,
                         const Genome& genome) {
	ObjectiveFunction fn;
	fn.schema = schema;
	const std::size_t m = schema.size();
	for (std::size_t r = 0; r < conditions.size(); ++r) {
		RegressionRule rule;
		rule.condition = conditions[r];
		rule.weights.assign(genome.begin() + static_cast<std::ptrdiff_t>(r * m),
		                    genome.begin() + static_cast<std::ptrdiff_t>((r + 1) * m));
		fn.rules.push_back(std::move(rule));
	}
	return fn;
}

Genome encode(const ObjectiveFunction& fn) {
	Genome g;
	for (const auto& rule : fn.rules) {
		g.insert(g.end(), rule.weights.begin(), rule.weights.end());
	}
	return g;
}

namespace {

/// A comparison with the rule each side falls into resolved up front; the
/// conditions do not change during a search.
struct PreparedComparison {
	const std::vector<double>* m1;
	const std::vector<double>* m2;
	std::size_t rule1;
	std::size_t rule2;
	Verdict verdict;
};

/// Global error first; among equal errors, the larger smallest quality gap
/// over the strict preferences the genome satisfies.
struct Score {
	ErrorSummary error;
	double margin = std::numeric_limits<double>::infinity();

	bool operator<(const Score& o) const {
		return error.global_error < o.error.global_error ||
		       (error.global_error == o.error.global_error && margin > o.margin);
	}
};

class Fitness {
public:
	Fitness(std::span<const RuleCondition> conditions, const ComparisonSet& set,
	        const ErrorConfig& cfg)
		: cfg_(cfg), measures_(set.schema.size()) {
		ObjectiveFunction shape;
		shape.schema = set.schema;
		for (const auto& cond : conditions) {
			shape.rules.push_back({cond, {}});
		}
		for (const auto& c : set.comparisons) {
			prepared_.push_back({&c.sol1.measures, &c.sol2.measures, shape.rule_for(c.sol1.measures),
			                     shape.rule_for(c.sol2.measures), set.preferences.at(c.id)});
		}
	}

	Score operator()(const Genome& g) const {
		Score out;
		double total = 0.0;
		for (const auto& pc : prepared_) {
			const double f1 = weighted_mean(block(g, pc.rule1), *pc.m1);
			const double f2 = weighted_mean(block(g, pc.rule2), *pc.m2);
			if (compatibility(f1, f2, pc.verdict, cfg_.tie_epsilon) != 0) {
				++out.error.incompatible;
				total += cfg_.val_error + std::abs(f1 - f2);
			} else if (pc.verdict != Verdict::Tie) {
				out.margin = std::min(out.margin, std::abs(f1 - f2));
			}
		}
		out.error.comparisons = prepared_.size();
		out.error.global_error = total / static_cast<double>(out.error.comparisons);
		return out;
	}

private:
	std::span<const int> block(const Genome& g, std::size_t rule) const {
		return std::span<const int>(g).subspan(rule * measures_, measures_);
	}

	ErrorConfig cfg_;
	std::size_t measures_;
	std::vector<PreparedComparison> prepared_;
};

void repair(Genome& g, std::size_t block_size, int lo, int hi, std::mt19937_64& rng) {
	for (auto& gene : g) {
		gene = std::clamp(gene, lo, hi);
	}
	std::uniform_int_distribution<std::size_t> pick(0, block_size - 1);
	for (std::size_t start = 0; start < g.size(); start += block_size) {
		const auto first = g.begin() + static_cast<std::ptrdiff_t>(start);
		if (std::all_of(first, first + static_cast<std::ptrdiff_t>(block_size),
		                [](int w) { return w == 0; })) {
			g[start + pick(rng)] = 1;
		}
	}
}

/// Distinct genomes sharing the lowest global error seen so far.
struct TiedGenomes {
	double error = std::numeric_limits<double>::infinity();
	std::set<Genome> genomes;

	void note(const Genome& g, double e) {
		if (e < error) {
			error = e;
			genomes.clear();
		}
		if (e == error) {
			genomes.insert(g);
		}
	}
};

/// Mean of the blockwise-normalised genomes, rescaled so each block's
/// largest weight is @p weight_max and rounded.
Genome consensus(const std::set<Genome>& genomes, std::size_t block, int weight_max) {
	const std::size_t genes = genomes.begin()->size();
	std::vector<double> mean(genes, 0.0);
	for (const auto& g : genomes) {
		for (std::size_t start = 0; start < genes; start += block) {
			const auto first = g.begin() + static_cast<std::ptrdiff_t>(start);
			const double sum = std::accumulate(first, first + static_cast<std::ptrdiff_t>(block), 0.0);
			for (std::size_t k = start; k < start + block; ++k) {
				mean[k] += g[k] / sum;
			}
		}
	}
	Genome out(genes);
	for (std::size_t start = 0; start < genes; start += block) {
		const auto first = mean.begin() + static_cast<std::ptrdiff_t>(start);
		const double top = *std::max_element(first, first + static_cast<std::ptrdiff_t>(block));
		for (std::size_t k = start; k < start + block; ++k) {
			out[k] = static_cast<int>(std::lround(mean[k] / top * weight_max));
		}
	}
	return out;
}

constexpr int kDuplicateRetries = 8;

}  // namespace

SearchResult search_weights(std::span<const RuleCondition> conditions, const ComparisonSet& set,
                            const ErrorConfig& error_cfg, const GaConfig& ga_cfg,
                            std::span<const Genome> seeds) {
	if (auto v = validate(ga_cfg); !v.empty()) {
		throw InvalidInput(v.front().path + ": " + v.front().message);
	}
	if (conditions.empty() || !conditions.back().is_catch_all()) {
		throw InvalidInput("rule conditions must end with a catch-all");
	}
	if (set.comparisons.empty()) {
		throw InvalidInput("cannot search weights on an empty comparison set");
	}
	for (const auto& c : set.comparisons) {
		if (!set.preferences.contains(c.id)) {
			throw InvalidInput("comparison '" + c.id + "' has no preference");
		}
	}

	const std::size_t block = set.schema.size();
	const std::size_t genes = block * conditions.size();
	const Fitness fitness(conditions, set, error_cfg);
	std::mt19937_64 rng(ga_cfg.seed);
	std::uniform_int_distribution<int> gene_value(ga_cfg.weight_min, ga_cfg.weight_max);
	std::uniform_real_distribution<double> unit(0.0, 1.0);
	std::uniform_int_distribution<std::size_t> pick(0, ga_cfg.population_size - 1);
	std::uniform_int_distribution<std::size_t> gene_pick(0, genes - 1);

	std::vector<Genome> pop;
	pop.reserve(ga_cfg.population_size);
	{
		Genome ones(genes, std::clamp(1, ga_cfg.weight_min, ga_cfg.weight_max));
		repair(ones, block, ga_cfg.weight_min, ga_cfg.weight_max, rng);
		pop.push_back(std::move(ones));
	}
	for (const auto& s : seeds) {
		if (s.size() == genes && pop.size() < ga_cfg.population_size) {
			Genome g = s;
			repair(g, block, ga_cfg.weight_min, ga_cfg.weight_max, rng);
			pop.push_back(std::move(g));
		}
	}
	while (pop.size() < ga_cfg.population_size) {
		Genome g(genes);
		for (auto& gene : g) {
			gene = gene_value(rng);
		}
		repair(g, block, ga_cfg.weight_min, ga_cfg.weight_max, rng);
		pop.push_back(std::move(g));
	}

	std::vector<Score> fit(pop.size());
	for (std::size_t i = 0; i < pop.size(); ++i) {
		fit[i] = fitness(pop[i]);
	}

	auto better = [&](std::size_t a, std::size_t b) {
		return fit[a] < fit[b] || (!(fit[b] < fit[a]) && a < b);
	};
	auto tournament = [&] {
		std::size_t best = pick(rng);
		for (std::size_t k = 1; k < ga_cfg.tournament_size; ++k) {
			const std::size_t other = pick(rng);
			if (better(other, best)) {
				best = other;
			}
		}
		return best;
	};

	std::size_t best_idx = 0;
	for (std::size_t i = 1; i < pop.size(); ++i) {
		if (better(i, best_idx)) best_idx = i;
	}
	Genome best = pop[best_idx];
	Score best_fit = fit[best_idx];

	TiedGenomes tied;
	for (std::size_t i = 0; i < pop.size(); ++i) {
		tied.note(pop[i], fit[i].error.global_error);
	}
	SearchResult result;
	result.trace.push_back(best_fit.error.global_error);

	for (std::size_t gen = 0; gen < ga_cfg.generations; ++gen) {
		if (ga_cfg.early_stop && best_fit.error.global_error == 0.0) {
			break;
		}
		std::vector<std::size_t> order(pop.size());
		std::iota(order.begin(), order.end(), 0);
		std::sort(order.begin(), order.end(), better);

		std::vector<Genome> next;
		std::vector<Score> next_fit;
		std::set<Genome> members;
		next.reserve(pop.size());
		for (std::size_t e = 0; e < ga_cfg.elitism_count; ++e) {
			next.push_back(pop[order[e]]);
			next_fit.push_back(fit[order[e]]);
			members.insert(next.back());
		}
		while (next.size() < ga_cfg.population_size) {
			const Genome& a = pop[tournament()];
			const Genome& b = pop[tournament()];
			Genome child = a;
			if (unit(rng) < ga_cfg.crossover_rate) {
				for (std::size_t k = 0; k < genes; ++k) {
					if (unit(rng) < 0.5) {
						child[k] = b[k];
					}
				}
			}
			for (auto& gene : child) {
				if (unit(rng) < ga_cfg.mutation_rate) {
					gene = gene_value(rng);
				}
			}
			repair(child, block, ga_cfg.weight_min, ga_cfg.weight_max, rng);
			// A copy of a member adds nothing; resample genes until it is new.
			for (int attempt = 0; attempt < kDuplicateRetries && members.contains(child); ++attempt) {
				child[gene_pick(rng)] = gene_value(rng);
				repair(child, block, ga_cfg.weight_min, ga_cfg.weight_max, rng);
			}
			members.insert(child);
			next_fit.push_back(fitness(child));
			tied.note(child, next_fit.back().error.global_error);
			next.push_back(std::move(child));
		}
		pop = std::move(next);
		fit = std::move(next_fit);

		std::size_t gen_best = 0;
		for (std::size_t i = 1; i < pop.size(); ++i) {
			if (better(i, gen_best)) gen_best = i;
		}
		if (fit[gen_best] < best_fit) {
			best_fit = fit[gen_best];
			best = pop[gen_best];
		}
		result.trace.push_back(best_fit.error.global_error);
	}

	if (ga_cfg.consensus && tied.genomes.size() > 1 &&
	    tied.error == best_fit.error.global_error) {
		Genome g = consensus(tied.genomes, block, ga_cfg.weight_max);
		repair(g, block, ga_cfg.weight_min, ga_cfg.weight_max, rng);
		const Score score = fitness(g);
		if (score.error.global_error <= best_fit.error.global_error) {
			best = std::move(g);
			best_fit = score;
		}
	}

	result.function = decode(set.schema, conditions, best);
	result.error = best_fit.error;
	result.genome = std::move(best);
	return result;
}

}  // namespace prefforge
