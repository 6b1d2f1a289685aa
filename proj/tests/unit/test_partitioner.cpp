/// @file  test_partitioner.cpp

#include <doctest.h>

#include <random>
#include <sstream>

#include <prefforge/partitioner.hpp>

#include "test_helpers.hpp"

using namespace prefforge;

namespace {

/// Incompatible examples sit in m0 < 30; everything else is compatible.
std::vector<LabeledExample> banded(std::uint64_t seed, std::size_t n) {
	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> value(0, 100);
	std::vector<LabeledExample> out;
	for (std::size_t i = 0; i < n; ++i) {
		std::vector<double> m{value(rng), value(rng)};
		out.push_back({m, m[0] < 30 ? Label::Incompatible : Label::Compatible});
	}
	return out;
}

}  // namespace

TEST_CASE("labels follow comparison compatibility, two per answered comparison") {
	ComparisonSet set;
	set.schema = helpers::schema(1);
	set.comparisons.push_back(helpers::comparison("ok", {80}, {20}));
	set.comparisons.push_back(helpers::comparison("bad", {20}, {80}));
	set.comparisons.push_back(helpers::comparison("open", {20}, {80}));
	set.preferences["ok"] = Verdict::PreferSol1;
	set.preferences["bad"] = Verdict::PreferSol1;
	const auto fn = helpers::single_rule(set.schema, {1});
	const auto ex = label_solutions(fn, set, {});
	REQUIRE(ex.size() == 4);
	CHECK(ex[0].label == Label::Compatible);
	CHECK(ex[1].label == Label::Compatible);
	CHECK(ex[2].label == Label::Incompatible);
	CHECK(ex[2].measures == std::vector<double>{20});
}

TEST_CASE("induction finds a threshold band") {
	const auto ex = banded(1, 300);
	const auto rules = induce_rules(ex, {});
	REQUIRE(rules.size() >= 2);
	CHECK(rules.back().is_catch_all());
	const auto& first = rules.front();
	REQUIRE_FALSE(first.clauses.empty());
	CHECK(first.clauses[0].measure == 0);
	CHECK(first.clauses[0].threshold == doctest::Approx(30).epsilon(0.05));
	std::size_t tp = 0, fp = 0;
	for (const auto& e : ex) {
		if (first.matches(e.measures)) (e.label == Label::Incompatible ? tp : fp)++;
	}
	CHECK(tp > 10 * fp);
}

TEST_CASE("induction returns only the catch-all without both labels") {
	auto ex = banded(2, 50);
	for (auto& e : ex) e.label = Label::Compatible;
	CHECK(induce_rules(ex, {}).size() == 1);
	CHECK(induce_rules({}, {}).size() == 1);
	PartitionConfig off;
	off.max_rules = 0;
	CHECK(induce_rules(banded(2, 50), off).size() == 1);
}

TEST_CASE("random labels yield no rule") {
	std::mt19937_64 rng(3);
	std::uniform_real_distribution<double> value(0, 100);
	std::vector<LabeledExample> ex;
	for (int i = 0; i < 200; ++i) {
		ex.push_back({{value(rng), value(rng)}, rng() % 4 == 0 ? Label::Incompatible : Label::Compatible});
	}
	CHECK(induce_rules(ex, {}).size() <= 2);
}

TEST_CASE("property: induction is seeded and respects limits") {
	for (std::uint64_t seed = 1; seed <= 10; ++seed) {
		const auto ex = banded(seed, 200);
		PartitionConfig cfg;
		cfg.seed = seed;
		cfg.max_rules = 2;
		cfg.max_clauses_per_rule = 1;
		const auto a = induce_rules(ex, cfg);
		CHECK(a == induce_rules(ex, cfg));
		CHECK(a.size() <= 3);
		for (std::size_t r = 0; r + 1 < a.size(); ++r) {
			CHECK(a[r].clauses.size() == 1);
		}
		CHECK(a.back().is_catch_all());
	}
}

TEST_CASE("refinement prepends new conditions and keeps the old list") {
	ComparisonSet set;
	set.schema = helpers::schema(2);
	std::mt19937_64 rng(4);
	std::uniform_real_distribution<double> value(0, 100);
	for (int k = 0; k < 120; ++k) {
		std::vector<double> a{value(rng), value(rng)};
		std::vector<double> b{a[0] + (value(rng) - 50) / 10, value(rng)};
		const std::string id = "c" + std::to_string(k);
		set.comparisons.push_back(helpers::comparison(id, a, b));
		// Below m0 = 40 the user ranks by m0, elsewhere by m1.
		const bool low = a[0] < 40;
		const double da = low ? a[0] - b[0] : a[1] - b[1];
		set.preferences[id] = da > 0 ? Verdict::PreferSol1 : Verdict::PreferSol2;
	}
	const auto fn = helpers::single_rule(set.schema, {0, 1});
	const std::vector<RuleCondition> current{RuleCondition{}};
	const auto refined = refine_partitions(current, fn, set, {}, {});
	REQUIRE(refined.size() >= 2);
	CHECK(refined.back().is_catch_all());
	CHECK(refined.front().clauses[0].measure == 0);
}

TEST_CASE("examples CSV") {
	std::ostringstream out;
	std::vector<LabeledExample> ex{{{1.5, 2}, Label::Incompatible}};
	write_examples_csv(out, helpers::schema(2), ex);
	CHECK(out.str() == "m0,m1,label\n1.5,2,incompatible\n");
}
