/// @file  building_fixture.hpp
/// @brief Building-generalisation fixture: six constraint-satisfaction
///        measures, a learned three-rule satisfaction function, and two
///        50-comparison sets (learning and test) built so that this function
///        scores known incompatible counts and global errors on them.
///
/// The sets are synthetic. Each one is generated from a seed and a list of
/// error margins for the comparisons that must disagree with the function.
/// Everything else is compatible with a margin well above the tie tolerance,
/// so the published counts hold for any tie_epsilon in [0, 2).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <prefforge/measure_model.hpp>
#include <prefforge/objective_function.hpp>

namespace prefforge::fixture {

/// S_cv, S_el, S_sq, S_gr, S_or, S_sz on [0, 100].
MeasureSchema building_schema();

/// Convexity-split function; the third rule is the catch-all (S_cv >= 93).
ObjectiveFunction building_function();

struct FixtureSpec {
	std::string prefix;  ///< instance/comparison id prefix
	std::size_t comparisons = 50;
	/// |f(sol1) - f(sol2)| of each incompatible comparison; 0 means an
	/// equal-vector pair that the user still told apart.
	std::vector<double> incompatible_margins;
	std::uint64_t seed = 1;
};

/// Builds a fully answered set realising @p spec under @p fn.
ComparisonSet make_fixture_set(const ObjectiveFunction& fn, const FixtureSpec& spec);

/// 50 comparisons, 5 incompatible, global error 4.25 at val_error 40.
FixtureSpec learning_spec();
/// 50 comparisons, 5 incompatible, global error 4.63 at val_error 40.
FixtureSpec test_spec();

}  // namespace prefforge::fixture
