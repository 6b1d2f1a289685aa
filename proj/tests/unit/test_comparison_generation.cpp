/// @file  test_comparison_generation.cpp

#include <doctest.h>

#include <set>

#include <prefforge/comparison_generation.hpp>
#include <prefforge/error.hpp>
#include <prefforge/building_fixture.hpp>

#include "test_helpers.hpp"

using namespace prefforge;

TEST_CASE("pair structure by tolerance") {
	const std::vector<double> a{10, 20, 30};
	CHECK(classify_pair(a, std::vector<double>{10.5, 20, 30}, 1.0).kind == StructureKind::EqualVectors);
	const auto one = classify_pair(a, std::vector<double>{10, 25, 30}, 1.0);
	CHECK(one.kind == StructureKind::OneMeasureDiffers);
	CHECK(one.differing == std::vector<std::size_t>{1});
	CHECK(classify_pair(a, std::vector<double>{0, 25, 30}, 1.0).kind == StructureKind::TwoMeasuresDiffer);
	CHECK(classify_pair(a, std::vector<double>{0, 0, 0}, 1.0).kind == StructureKind::Unconstrained);
}

TEST_CASE("generation pairs solutions of the same instance only") {
	const auto schema = fixture::building_schema();
	const auto instances = synthesize_graded_instances(schema, 12, 5, GradedModel{}, 3);
	GenerationConfig cfg;
	cfg.pairs_per_instance = 4;
	const auto gen = generate_comparisons(schema, instances, cfg);
	CHECK(gen.set.comparisons.size() == 48);
	CHECK(gen.tags.size() == 48);
	CHECK(gen.set.preferences.empty());
	CHECK(validate(gen.set).empty());
	std::set<std::pair<std::string, std::string>> seen;
	for (const auto& c : gen.set.comparisons) {
		CHECK(c.sol1.instance_id == c.sol2.instance_id);
		CHECK(seen.insert({c.sol1.id, c.sol2.id}).second);
	}
}

TEST_CASE("generation honours quotas and caps") {
	const auto schema = helpers::schema(3);
	ProblemInstance inst{"i", "", {}};
	inst.solutions.push_back({"a", "i", {10, 10, 10}, std::nullopt});
	inst.solutions.push_back({"b", "i", {10, 10, 10}, std::nullopt});
	inst.solutions.push_back({"c", "i", {50, 10, 10}, std::nullopt});
	inst.solutions.push_back({"d", "i", {50, 50, 10}, std::nullopt});
	inst.solutions.push_back({"e", "i", {90, 90, 90}, std::nullopt});
	GenerationConfig cfg;
	cfg.pairs_per_instance = 2;
	cfg.structured_pair_quotas.equal_vectors = 1;
	cfg.structured_pair_quotas.one_measure_differs = 1;
	for (std::uint64_t seed = 1; seed <= 5; ++seed) {
		cfg.seed = seed;
		const auto gen = generate_comparisons(schema, std::vector<ProblemInstance>{inst}, cfg);
		REQUIRE(gen.tags.size() == 2);
		std::multiset<StructureKind> kinds;
		for (const auto& t : gen.tags) kinds.insert(t.kind);
		CHECK(kinds.count(StructureKind::EqualVectors) == 1);
		CHECK(kinds.count(StructureKind::OneMeasureDiffers) == 1);
	}

	cfg = GenerationConfig{};
	cfg.max_instances = 3;
	const auto many = synthesize_graded_instances(schema, 10, 3, GradedModel{}, 1);
	const auto gen = generate_comparisons(schema, many, cfg);
	std::set<std::string> used;
	for (const auto& c : gen.set.comparisons) used.insert(c.sol1.instance_id);
	CHECK(used.size() == 3);
}

TEST_CASE("generation skips singleton instances and fails when nothing is left") {
	const auto schema = helpers::schema(1);
	std::vector<ProblemInstance> lone{{"i", "", {{"a", "i", {1.0}, std::nullopt}}}};
	CHECK_THROWS_AS(generate_comparisons(schema, lone, {}), InvalidInput);
	lone.push_back({"j", "", {{"b", "j", {1.0}, std::nullopt}, {"c", "j", {2.0}, std::nullopt}}});
	const auto gen = generate_comparisons(schema, lone, {});
	CHECK(gen.set.comparisons.size() == 1);
	CHECK(gen.warnings.size() == 1);
}

TEST_CASE("generation is seed-deterministic") {
	const auto schema = fixture::building_schema();
	const auto inst = synthesize_instances(schema, 20, 6, {0.2, 0.2, 0.2}, 9);
	GenerationConfig cfg;
	cfg.seed = 4;
	CHECK(generate_comparisons(schema, inst, cfg).set == generate_comparisons(schema, inst, cfg).set);
	CHECK(inst == synthesize_instances(schema, 20, 6, {0.2, 0.2, 0.2}, 9));
}

TEST_CASE("synthesized instances stay in bounds") {
	const auto schema = fixture::building_schema();
	GradedModel model;
	model.tradeoff_spread = 0.3;
	for (const auto& inst : synthesize_graded_instances(schema, 30, 6, model, 2)) {
		CHECK(validate(schema, inst, "$").empty());
	}
	for (const auto& inst : synthesize_instances(schema, 30, 6, {0.3, 0.3, 0.3}, 2)) {
		CHECK(validate(schema, inst, "$").empty());
	}
	model.tradeoff_direction = {1, -1};
	CHECK_THROWS_AS(synthesize_graded_instances(schema, 1, 2, model, 1), InvalidInput);
}

TEST_CASE("structure mix yields structured pairs") {
	const auto schema = fixture::building_schema();
	const auto inst = synthesize_instances(schema, 40, 6, {0.5, 0.5, 0.5}, 11);
	GenerationConfig cfg;
	cfg.pairs_per_instance = 15;
	const auto gen = generate_comparisons(schema, inst, cfg);
	std::set<StructureKind> kinds;
	for (const auto& t : gen.tags) kinds.insert(t.kind);
	CHECK(kinds.size() == 4);
}
