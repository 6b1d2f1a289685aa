/// @file  oracle_sim.cpp

#include <prefforge/oracle_sim.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <prefforge/elicitation.hpp>
#include <prefforge/error.hpp>

namespace prefforge {

std::vector<Violation> validate(const OracleConfig& cfg) {
	std::vector<Violation> out = validate(cfg.ground_truth);
	for (auto& v : out) {
		v.path = "$.ground_truth" + v.path.substr(1);
	}
	if (!(cfg.tie_band >= 0.0)) out.push_back({"$.tie_band", "must be >= 0"});
	if (!(cfg.flip_probability >= 0.0 && cfg.flip_probability <= 1.0)) {
		out.push_back({"$.flip_probability", "must lie in [0, 1]"});
	}
	return out;
}

std::vector<Violation> validate(const SimulationConfig& cfg) {
	std::vector<Violation> out;
	if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
		out.push_back({"$.train_fraction", "must lie in (0, 1)"});
	}
	if (cfg.test_comparisons < 1) out.push_back({"$.test_comparisons", "must be at least 1"});
	if (cfg.generation.max_instances < 1) {
		out.push_back({"$.generation.max_instances", "must be at least 1"});
	}
	if (cfg.generation.pairs_per_instance < 1) {
		out.push_back({"$.generation.pairs_per_instance", "must be at least 1"});
	}
	return out;
}

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
	std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
	for (unsigned char ch : s) {
		h ^= ch;
		h *= 0x100000001b3ULL;
	}
	return h;
}

}  // namespace

Preference oracle_prefer(const OracleConfig& oracle, const Comparison& c) {
	const double g1 = evaluate(oracle.ground_truth, c.sol1);
	const double g2 = evaluate(oracle.ground_truth, c.sol2);
	Preference p{c.id, Verdict::Tie};
	if (std::abs(g1 - g2) <= oracle.tie_band) {
		return p;
	}
	p.verdict = g1 > g2 ? Verdict::PreferSol1 : Verdict::PreferSol2;
	if (oracle.flip_probability > 0.0) {
		std::mt19937_64 rng(fnv1a(c.id, oracle.seed));
		if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < oracle.flip_probability) {
			p.verdict = p.verdict == Verdict::PreferSol1 ? Verdict::PreferSol2 : Verdict::PreferSol1;
		}
	}
	return p;
}

ClosedLoopReport run_closed_loop(const MeasureSchema& schema,
                                 std::span<const ProblemInstance> instances,
                                 const SimulationConfig& sim, const OracleConfig& oracle,
                                 const LearnConfig& learn) {
	if (auto v = validate(sim); !v.empty()) {
		throw InvalidInput(v.front().path + ": " + v.front().message);
	}
	if (auto v = validate(oracle); !v.empty()) {
		throw InvalidInput(v.front().path + ": " + v.front().message);
	}
	if (instances.size() < 2) {
		throw InvalidInput("need at least two instances for disjoint train and test groups");
	}

	std::mt19937_64 rng(sim.seed);
	std::vector<std::size_t> order(instances.size());
	std::iota(order.begin(), order.end(), 0);
	std::shuffle(order.begin(), order.end(), rng);
	const auto n_train = std::clamp<std::size_t>(
	    static_cast<std::size_t>(std::llround(sim.train_fraction * instances.size())), 1,
	    instances.size() - 1);
	std::vector<ProblemInstance> train_instances, test_instances;
	for (std::size_t k = 0; k < order.size(); ++k) {
		(k < n_train ? train_instances : test_instances).push_back(instances[order[k]]);
	}

	ClosedLoopReport out;
	auto train_gen = generate_comparisons(schema, train_instances, sim.generation);
	Session session(std::move(train_gen.set), default_pipeline(schema, sim.max_questions),
	                sim.max_questions, sim.seed, sim.generation.measure_tolerance);
	while (auto c = session.next_comparison()) {
		session.submit_preference(oracle_prefer(oracle, *c));
	}
	out.consistency_flags = consistency_flags(session);
	out.session_log = session.log();
	out.train_set = answered_subset(session.set());
	out.learned = learn_objective(out.train_set, learn);
	out.train = global_error(out.learned.function, out.train_set, learn.error);

	GenerationConfig test_cfg = sim.generation;
	test_cfg.seed = sim.generation.seed + 1;
	test_cfg.structured_pair_quotas = {};
	auto test_gen = generate_comparisons(schema, test_instances, test_cfg);
	out.test_set.schema = schema;
	std::sample(test_gen.set.comparisons.begin(), test_gen.set.comparisons.end(),
	            std::back_inserter(out.test_set.comparisons),
	            static_cast<std::ptrdiff_t>(sim.test_comparisons), rng);
	for (auto& c : out.test_set.comparisons) {
		c.id = "t" + c.id;
		out.test_set.preferences[c.id] = oracle_prefer(oracle, c).verdict;
	}
	out.test = global_error(out.learned.function, out.test_set, learn.error);
	return out;
}

}  // namespace prefforge
