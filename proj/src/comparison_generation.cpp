/// @file  comparison_generation.cpp

#include <prefforge/comparison_generation.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include <prefforge/error.hpp>

namespace prefforge {

PairStructure classify_pair(std::span<const double> a, std::span<const double> b,
                            double measure_tolerance) {
	PairStructure out;
	for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
		if (std::abs(a[i] - b[i]) > measure_tolerance) {
			out.differing.push_back(i);
		}
	}
	switch (out.differing.size()) {
	case 0: out.kind = StructureKind::EqualVectors; break;
	case 1: out.kind = StructureKind::OneMeasureDiffers; break;
	case 2: out.kind = StructureKind::TwoMeasuresDiffer; break;
	default: out.kind = StructureKind::Unconstrained; break;
	}
	return out;
}

namespace {

struct CandidatePair {
	std::size_t first;
	std::size_t second;
	StructureKind kind;
};

std::size_t quota_for(const StructuredPairQuotas& q, StructureKind k) {
	switch (k) {
	case StructureKind::EqualVectors: return q.equal_vectors;
	case StructureKind::OneMeasureDiffers: return q.one_measure_differs;
	case StructureKind::TwoMeasuresDiffer: return q.two_measures_differ;
	case StructureKind::Unconstrained: return q.unconstrained;
	}
	return 0;
}

}  // namespace

GeneratedSet generate_comparisons(const MeasureSchema& schema,
                                  std::span<const ProblemInstance> instances,
                                  const GenerationConfig& config) {
	GeneratedSet out;
	out.set.schema = schema;

	std::vector<const ProblemInstance*> usable;
	for (const auto& inst : instances) {
		if (inst.solutions.size() < 2) {
			out.warnings.push_back("instance '" + inst.id + "' has fewer than two solutions; skipped");
			continue;
		}
		usable.push_back(&inst);
	}
	if (usable.empty()) {
		throw InvalidInput("no instance with at least two solutions");
	}

	std::mt19937_64 rng(config.seed);
	if (usable.size() > config.max_instances) {
		std::vector<const ProblemInstance*> sampled;
		std::sample(usable.begin(), usable.end(), std::back_inserter(sampled),
		            static_cast<std::ptrdiff_t>(config.max_instances), rng);
		usable = std::move(sampled);
	}

	std::size_t next_id = 0;
	for (const ProblemInstance* inst : usable) {
		std::vector<CandidatePair> pairs;
		for (std::size_t i = 0; i < inst->solutions.size(); ++i) {
			for (std::size_t j = i + 1; j < inst->solutions.size(); ++j) {
				const auto s = classify_pair(inst->solutions[i].measures,
				                             inst->solutions[j].measures,
				                             config.measure_tolerance);
				pairs.push_back({i, j, s.kind});
			}
		}
		std::vector<std::size_t> order(pairs.size());
		for (std::size_t k = 0; k < order.size(); ++k) {
			order[k] = k;
		}
		std::shuffle(order.begin(), order.end(), rng);

		std::vector<bool> chosen(pairs.size(), false);
		std::size_t taken = 0;
		for (auto kind : {StructureKind::EqualVectors, StructureKind::OneMeasureDiffers,
		                  StructureKind::TwoMeasuresDiffer, StructureKind::Unconstrained}) {
			std::size_t quota = quota_for(config.structured_pair_quotas, kind);
			for (std::size_t k : order) {
				if (quota == 0 || taken == config.pairs_per_instance) {
					break;
				}
				if (!chosen[k] && pairs[k].kind == kind) {
					chosen[k] = true;
					--quota;
					++taken;
				}
			}
		}
		for (std::size_t k : order) {
			if (taken == config.pairs_per_instance) {
				break;
			}
			if (!chosen[k]) {
				chosen[k] = true;
				++taken;
			}
		}

		for (std::size_t k = 0; k < pairs.size(); ++k) {
			if (!chosen[k]) {
				continue;
			}
			Comparison c;
			c.id = "c" + std::to_string(++next_id);
			c.sol1 = inst->solutions[pairs[k].first];
			c.sol2 = inst->solutions[pairs[k].second];
			out.tags.push_back({c.id, pairs[k].kind});
			out.set.comparisons.push_back(std::move(c));
		}
	}
	return out;
}

std::vector<ProblemInstance> synthesize_instances(const MeasureSchema& schema,
                                                  std::size_t n_instances,
                                                  std::size_t solutions_per_instance,
                                                  const StructureMix& mix, std::uint64_t seed) {
	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> value(schema.val_min, schema.val_max);
	std::uniform_real_distribution<double> coin(0.0, 1.0);
	std::uniform_int_distribution<std::size_t> pick_measure(0, schema.size() - 1);
	const double min_change = 0.05 * (schema.val_max - schema.val_min);

	auto draw = [&] { return std::round(value(rng) * 100.0) / 100.0; };
	auto random_vector = [&] {
		std::vector<double> v(schema.size());
		for (auto& x : v) {
			x = draw();
		}
		return v;
	};
	auto resample = [&](std::vector<double>& v, std::size_t m) {
		const double old = v[m];
		do {
			v[m] = draw();
		} while (std::abs(v[m] - old) < min_change);
	};

	std::vector<ProblemInstance> out;
	out.reserve(n_instances);
	for (std::size_t k = 0; k < n_instances; ++k) {
		ProblemInstance inst;
		inst.id = "i" + std::to_string(k + 1);
		inst.description = "synthetic instance " + std::to_string(k + 1);
		std::vector<std::vector<double>> vectors;
		vectors.push_back(random_vector());
		const auto base = vectors.front();

		if (coin(rng) < mix.equal) {
			vectors.push_back(base);
		}
		if (coin(rng) < mix.one_differs) {
			auto v = base;
			resample(v, pick_measure(rng));
			vectors.push_back(std::move(v));
		}
		if (coin(rng) < mix.two_differ && schema.size() >= 2) {
			auto v = base;
			const std::size_t a = pick_measure(rng);
			std::size_t b = a;
			while (b == a) {
				b = pick_measure(rng);
			}
			resample(v, a);
			resample(v, b);
			vectors.push_back(std::move(v));
		}
		while (vectors.size() < std::max<std::size_t>(solutions_per_instance, 2)) {
			vectors.push_back(random_vector());
		}

		for (std::size_t j = 0; j < vectors.size(); ++j) {
			Solution sol;
			sol.id = inst.id + "-s" + std::to_string(j + 1);
			sol.instance_id = inst.id;
			sol.measures = std::move(vectors[j]);
			inst.solutions.push_back(std::move(sol));
		}
		out.push_back(std::move(inst));
	}
	return out;
}

std::vector<ProblemInstance> synthesize_graded_instances(const MeasureSchema& schema,
                                                         std::size_t n_instances,
                                                         std::size_t solutions_per_instance,
                                                         const GradedModel& model, std::uint64_t seed) {
	if (!model.tradeoff_direction.empty() && model.tradeoff_direction.size() != schema.size()) {
		throw InvalidInput("trade-off direction needs one entry per measure");
	}
	std::mt19937_64 rng(seed);
	const double range = schema.val_max - schema.val_min;
	std::uniform_real_distribution<double> base_value(schema.val_min + model.base_low * range,
	                                                  schema.val_min + model.base_high * range);
	std::normal_distribution<double> shift(0.0, model.level_spread * range);
	std::normal_distribution<double> tradeoff(0.0, model.tradeoff_spread * range);
	std::normal_distribution<double> noise(0.0, model.noise * range);

	std::vector<ProblemInstance> out;
	out.reserve(n_instances);
	for (std::size_t k = 0; k < n_instances; ++k) {
		ProblemInstance inst;
		inst.id = "i" + std::to_string(k + 1);
		inst.description = "graded instance " + std::to_string(k + 1);
		std::vector<double> base(schema.size());
		for (auto& b : base) {
			b = base_value(rng);
		}
		std::vector<double> direction = model.tradeoff_direction;
		if (direction.empty()) {
			direction.assign(schema.size(), -1.0);
			std::fill_n(direction.begin(), (schema.size() + 1) / 2, 1.0);
			std::shuffle(direction.begin(), direction.end(), rng);
		}
		for (std::size_t j = 0; j < std::max<std::size_t>(solutions_per_instance, 2); ++j) {
			Solution sol;
			sol.id = inst.id + "-s" + std::to_string(j + 1);
			sol.instance_id = inst.id;
			const double level = shift(rng);
			const double trade = tradeoff(rng);
			for (std::size_t m = 0; m < base.size(); ++m) {
				const double v = std::clamp(base[m] + level + trade * direction[m] + noise(rng),
				                            schema.val_min, schema.val_max);
				sol.measures.push_back(std::round(v * 100.0) / 100.0);
			}
			inst.solutions.push_back(std::move(sol));
		}
		out.push_back(std::move(inst));
	}
	return out;
}

const char* to_string(StructureKind k) noexcept {
	switch (k) {
	case StructureKind::EqualVectors: return "equal-vectors";
	case StructureKind::OneMeasureDiffers: return "one-measure-differs";
	case StructureKind::TwoMeasuresDiffer: return "two-measures-differ";
	case StructureKind::Unconstrained: return "unconstrained";
	}
	return "unconstrained";
}

}  // namespace prefforge
