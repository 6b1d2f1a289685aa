/// @file  building_fixture.cpp

#include <prefforge/building_fixture.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

#include "number_format.hpp"

namespace prefforge::fixture {

MeasureSchema building_schema() {
	MeasureSchema s;
	s.measures = {{"S_cv", "Convexity"},   {"S_el", "Elongation"},  {"S_sq", "Squareness"},
	              {"S_gr", "Granularity"}, {"S_or", "Orientation"}, {"S_sz", "Size"}};
	s.val_min = 0.0;
	s.val_max = 100.0;
	return s;
}

ObjectiveFunction building_function() {
	ObjectiveFunction fn;
	fn.schema = building_schema();
	fn.rules.push_back({RuleCondition{{{0, Relation::Less, 83.0}}}, {6, 2, 9, 2, 2, 7}});
	fn.rules.push_back({RuleCondition{{{0, Relation::GreaterEqual, 83.0}, {0, Relation::Less, 93.0}}},
	                    {7, 7, 1, 7, 0, 6}});
	fn.rules.push_back({RuleCondition{}, {9, 9, 3, 2, 0, 7}});
	return fn;
}

FixtureSpec learning_spec() {
	return {"L", 50, {0.0, 1.5, 2.5, 3.5, 5.0}, 4025};
}

FixtureSpec test_spec() {
	return {"T", 50, {0.0, 4.5, 6.5, 9.0, 11.5}, 4063};
}

namespace {

/// Rough building outline for the UI: footprint from size, aspect from elongation.
std::string outline(const std::vector<double>& m) {
	const double w = std::round(20.0 + m[5] / 4.0);
	const double h = std::round(w * (0.4 + m[1] / 200.0));
	const double notch = std::round((100.0 - m[0]) / 10.0);
	auto n = [](double v) { return detail::format_number(v); };
	return "<polygon points=\"0,0 " + n(w) + ",0 " + n(w) + "," + n(h - notch) + " " +
	       n(w - notch) + "," + n(h - notch) + " " + n(w - notch) + "," + n(h) + " 0," + n(h) + "\"/>";
}

}  // namespace

ComparisonSet make_fixture_set(const ObjectiveFunction& fn, const FixtureSpec& spec) {
	std::mt19937_64 rng(spec.seed);
	auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
	auto coin = [&](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };

	ComparisonSet set;
	set.schema = fn.schema;
	const std::size_t n_measures = fn.schema.size();

	// Positions of the comparisons that must disagree with fn.
	std::vector<std::size_t> slots(spec.comparisons);
	std::iota(slots.begin(), slots.end(), 0);
	std::shuffle(slots.begin(), slots.end(), rng);
	slots.resize(std::min(spec.incompatible_margins.size(), spec.comparisons));
	auto margin_at = [&](std::size_t k) -> std::optional<double> {
		auto it = std::find(slots.begin(), slots.end(), k);
		if (it == slots.end()) {
			return std::nullopt;
		}
		return spec.incompatible_margins[static_cast<std::size_t>(it - slots.begin())];
	};

	auto base_vector = [&] {
		std::vector<double> v(n_measures);
		v[0] = uniform_int(65, 100);
		for (std::size_t i = 1; i < n_measures; ++i) {
			v[i] = uniform_int(40, 100);
		}
		return v;
	};
	auto quality = [&](const std::vector<double>& v) {
		return weighted_mean(fn.rules[fn.rule_for(v)].weights, v);
	};

	for (std::size_t k = 0; k < spec.comparisons; ++k) {
		const std::string inst = spec.prefix + (k < 9 ? "0" : "") + std::to_string(k + 1);
		std::vector<double> a = base_vector();
		std::vector<double> b;
		Verdict verdict;  // relative to (a, b)

		if (auto margin = margin_at(k)) {
			b = a;
			if (*margin == 0.0) {
				verdict = coin(0.5) ? Verdict::PreferSol1 : Verdict::PreferSol2;
			} else {
				// Move the heaviest non-split measure so that b scores exactly
				// `margin` above a while staying in the same rule, then have
				// the user prefer a.
				const auto& w = fn.rules[fn.rule_for(a)].weights;
				const int den = std::accumulate(w.begin(), w.end(), 0);
				const auto j = static_cast<std::size_t>(std::max_element(w.begin() + 1, w.end()) - w.begin());
				const double change = *margin * den / w[j];
				if (a[j] + change <= fn.schema.val_max) {
					b[j] = a[j] + change;
					verdict = Verdict::PreferSol1;
				} else {
					b[j] = a[j] - change;
					verdict = Verdict::PreferSol2;
				}
			}
		} else if (coin(0.12)) {
			b = a;
			verdict = Verdict::Tie;
		} else {
			do {
				b = a;
				const int changes = uniform_int(1, 3);
				for (int c = 0; c < changes; ++c) {
					const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(n_measures) - 1));
					const int step = uniform_int(5, 30) * (coin(0.5) ? 1 : -1);
					b[j] = std::clamp(b[j] + step, fn.schema.val_min, fn.schema.val_max);
				}
			} while (std::abs(quality(a) - quality(b)) < 2.0);
			verdict = quality(a) > quality(b) ? Verdict::PreferSol1 : Verdict::PreferSol2;
		}

		Comparison c;
		c.id = inst;
		c.sol1 = {inst + "-a", inst, std::move(a), std::nullopt};
		c.sol2 = {inst + "-b", inst, std::move(b), std::nullopt};
		if (coin(0.5)) {
			std::swap(c.sol1.measures, c.sol2.measures);
			if (verdict != Verdict::Tie) {
				verdict = verdict == Verdict::PreferSol1 ? Verdict::PreferSol2 : Verdict::PreferSol1;
			}
		}
		c.sol1.display = outline(c.sol1.measures);
		c.sol2.display = outline(c.sol2.measures);
		set.preferences[c.id] = verdict;
		set.comparisons.push_back(std::move(c));
	}

	const double expected =
	    (40.0 * static_cast<double>(slots.size()) +
	     std::accumulate(spec.incompatible_margins.begin(),
	                     spec.incompatible_margins.begin() + static_cast<std::ptrdiff_t>(slots.size()), 0.0)) /
	    static_cast<double>(spec.comparisons);
	for (double eps : {0.0, 0.5}) {
		const auto got = global_error(fn, set, ErrorConfig{40.0, eps});
		if (got.incompatible != slots.size() || std::abs(got.global_error - expected) > 1e-9) {
			throw std::logic_error("fixture construction missed its target");
		}
	}
	return set;
}

}  // namespace prefforge::fixture
