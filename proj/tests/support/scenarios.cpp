/// @file  scenarios.cpp

#include "scenarios.hpp"

#include <numeric>
#include <random>

#include <prefforge/comparison_generation.hpp>
#include <prefforge/building_fixture.hpp>

namespace scenario {

using namespace prefforge;

ObjectiveFunction single_rule_truth(std::uint64_t seed) {
	ObjectiveFunction fn;
	fn.schema = fixture::building_schema();
	std::mt19937_64 rng(seed * 77);
	std::vector<int> w(fn.schema.size());
	for (auto& x : w) {
		x = std::uniform_int_distribution<int>(0, 10)(rng);
	}
	if (std::accumulate(w.begin(), w.end(), 0) == 0) {
		w[0] = 1;
	}
	fn.rules.push_back({RuleCondition{}, w});
	return fn;
}

SingleRule run_single_rule(std::uint64_t seed) {
	SingleRule out;
	out.oracle.ground_truth = single_rule_truth(seed);
	const auto& schema = out.oracle.ground_truth.schema;
	const auto instances = synthesize_graded_instances(schema, 40, 6, GradedModel{}, seed);
	SimulationConfig sim;
	sim.seed = seed;
	sim.generation.seed = seed;
	LearnConfig learn;
	learn.seed = seed;
	out.report = run_closed_loop(schema, instances, sim, out.oracle, learn);
	return out;
}

ObjectiveFunction piecewise_truth() {
	ObjectiveFunction fn = fixture::building_function();
	fn.rules[0].weights = {2, 10, 8, 1, 0, 3};
	fn.rules[1].weights = {2, 0, 1, 9, 10, 4};
	fn.rules[2].weights = {2, 8, 0, 2, 1, 10};
	return fn;
}

Piecewise run_piecewise(std::uint64_t seed) {
	Piecewise out;
	out.oracle.ground_truth = piecewise_truth();
	const auto& schema = out.oracle.ground_truth.schema;
	GradedModel model;
	model.base_low = 0.55;
	model.base_high = 1.0;
	model.level_spread = 0.0;
	model.noise = 0.03;
	model.tradeoff_spread = 0.2;
	model.tradeoff_direction = {0, 1, 1, -1, -1, 0};
	const auto instances = synthesize_graded_instances(schema, 100, 6, model, seed);
	SimulationConfig sim;
	sim.seed = seed;
	sim.generation.seed = seed;
	sim.generation.max_instances = 200;
	sim.max_questions = 150;
	LearnConfig learn;
	learn.seed = seed;
	out.report = run_closed_loop(schema, instances, sim, out.oracle, learn);
	LearnConfig flat = learn;
	flat.partition.max_rules = 0;
	out.single_rule = learn_objective(out.report.train_set, flat);
	return out;
}

}  // namespace scenario
