/// @file  test_weight_search.cpp

#include <doctest.h>

#include <random>

#include <prefforge/error.hpp>
#include <prefforge/weight_search.hpp>

#include "../support/oracles.hpp"
#include "test_helpers.hpp"

using namespace prefforge;

namespace {

/// Random two-measure problem with noisy verdicts from a hidden weighting.
ComparisonSet random_problem(std::uint64_t seed, std::size_t n, std::vector<oracle::Pair>& pairs) {
	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> value(0, 100);
	std::uniform_int_distribution<int> weight(0, 10);
	const int w0 = weight(rng);
	const int w1 = weight(rng) + 1;
	ComparisonSet set;
	set.schema = helpers::schema(2);
	for (std::size_t k = 0; k < n; ++k) {
		std::vector<double> a{value(rng), value(rng)};
		std::vector<double> b{value(rng), value(rng)};
		const double fa = (w0 * a[0] + w1 * a[1]) / (w0 + w1);
		const double fb = (w0 * b[0] + w1 * b[1]) / (w0 + w1);
		int p = std::abs(fa - fb) < 1.0 ? 2 : (fa > fb ? 0 : 1);
		if (rng() % 5 == 0) p = static_cast<int>(rng() % 3);
		const std::string id = "c" + std::to_string(k);
		set.comparisons.push_back(helpers::comparison(id, a, b));
		set.preferences[id] = static_cast<Verdict>(p);
		pairs.push_back({a, b, static_cast<oracle::Pref>(p)});
	}
	return set;
}

}  // namespace

TEST_CASE("encode and decode are inverse") {
	const auto schema = helpers::schema(2);
	std::vector<RuleCondition> conds{RuleCondition{{{0, Relation::Less, 50}}}, RuleCondition{}};
	const Genome g{1, 2, 3, 4};
	const auto fn = decode(schema, conds, g);
	REQUIRE(fn.rules.size() == 2);
	CHECK(fn.rules[1].weights == std::vector<int>{3, 4});
	CHECK(encode(fn) == g);
}

TEST_CASE("configuration validation") {
	GaConfig cfg;
	CHECK(validate(cfg).empty());
	cfg.population_size = 1;
	CHECK_FALSE(validate(cfg).empty());
	cfg = GaConfig{};
	cfg.mutation_rate = 1.5;
	CHECK_FALSE(validate(cfg).empty());
	cfg = GaConfig{};
	cfg.elitism_count = cfg.population_size;
	CHECK_FALSE(validate(cfg).empty());
	cfg = GaConfig{};
	cfg.weight_min = 5;
	cfg.weight_max = 4;
	CHECK_FALSE(validate(cfg).empty());
}

TEST_CASE("search preconditions") {
	std::vector<oracle::Pair> pairs;
	const auto set = random_problem(1, 10, pairs);
	const std::vector<RuleCondition> no_catch_all{RuleCondition{{{0, Relation::Less, 50}}}};
	CHECK_THROWS_AS(search_weights(no_catch_all, set, {}, {}), InvalidInput);
	auto partial = set;
	partial.preferences.erase("c0");
	CHECK_THROWS_AS(search_weights(std::vector<RuleCondition>{RuleCondition{}}, partial, {}, {}), InvalidInput);
}

TEST_CASE("search matches the exhaustive grid on small problems") {
	for (std::uint64_t seed = 100; seed < 105; ++seed) {
		std::vector<oracle::Pair> pairs;
		const auto set = random_problem(seed, 25, pairs);
		GaConfig ga;
		ga.seed = seed;
		const auto r = search_weights(std::vector<RuleCondition>{RuleCondition{}}, set, {}, ga);
		CHECK(r.error.global_error == oracle::grid_minimum(pairs, 40.0, 0.5));
		CHECK(r.error.global_error == global_error(r.function, set, {}).global_error);
	}
}

TEST_CASE("property: results are valid, seeded and the trace never rises") {
	for (std::uint64_t seed = 1; seed <= 5; ++seed) {
		std::vector<oracle::Pair> pairs;
		const auto set = random_problem(seed, 20, pairs);
		GaConfig ga;
		ga.seed = seed;
		ga.generations = 40;
		const std::vector<RuleCondition> conds{RuleCondition{{{0, Relation::Less, 50}}}, RuleCondition{}};
		const auto a = search_weights(conds, set, {}, ga);
		const auto b = search_weights(conds, set, {}, ga);
		CHECK(a.genome == b.genome);
		CHECK(a.trace == b.trace);
		CHECK(validate(a.function).empty());
		for (int w : a.genome) {
			CHECK(w >= ga.weight_min);
			CHECK(w <= ga.weight_max);
		}
		for (std::size_t i = 1; i < a.trace.size(); ++i) {
			CHECK(a.trace[i] <= a.trace[i - 1]);
		}
		CHECK(a.error.global_error <= a.trace.back());
	}
}

TEST_CASE("a seed genome is never lost") {
	std::vector<oracle::Pair> pairs;
	const auto set = random_problem(8, 30, pairs);
	GaConfig ga;
	ga.generations = 1;
	ga.population_size = 4;
	ga.elitism_count = 1;
	ga.consensus = false;
	const std::vector<RuleCondition> conds{RuleCondition{}};
	double best = 1e9;
	Genome best_g;
	for (int w0 = 0; w0 <= 10; ++w0) {
		for (int w1 = 0; w1 <= 10; ++w1) {
			if (w0 + w1 == 0) continue;
			const Genome g{w0, w1};
			const double e = global_error(decode(set.schema, conds, g), set, {}).global_error;
			if (e < best) {
				best = e;
				best_g = g;
			}
		}
	}
	const auto r = search_weights(conds, set, {}, ga, std::vector<Genome>{best_g});
	CHECK(r.error.global_error == best);
}

TEST_CASE("all-zero blocks are repaired") {
	ComparisonSet set;
	set.schema = helpers::schema(2);
	set.comparisons.push_back(helpers::comparison("c", {10, 90}, {90, 10}));
	set.preferences["c"] = Verdict::PreferSol1;
	GaConfig ga;
	ga.weight_min = 0;
	ga.weight_max = 1;
	ga.generations = 5;
	const auto r = search_weights(std::vector<RuleCondition>{RuleCondition{}}, set, {}, ga,
	                              std::vector<Genome>{Genome{0, 0}});
	CHECK(validate(r.function).empty());
	CHECK(r.error.global_error == 0.0);
	CHECK(r.genome == Genome{0, 1});
}
