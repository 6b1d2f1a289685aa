/// @file  elicitation.hpp
/// @brief The preference capture loop: chained comparison-choice strategies
///        pick the next comparison, the user answers, repeat until done.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <prefforge/measure_model.hpp>

namespace prefforge {

enum class StrategyKind { Consistency, Evolution, Order, Random };

/// Filter over comparisons. `measures` holds one id for Evolution, two for Order.
struct Strategy {
	StrategyKind kind = StrategyKind::Random;
	std::vector<std::string> measures;

	static Strategy consistency() { return {StrategyKind::Consistency, {}}; }
	static Strategy evolution(std::string m) { return {StrategyKind::Evolution, {std::move(m)}}; }
	static Strategy order(std::string m, std::string n) {
		return {StrategyKind::Order, {std::move(m), std::move(n)}};
	}
	static Strategy random() { return {StrategyKind::Random, {}}; }

	/// Display label such as `ORDER(S_cv,S_el)`.
	std::string label() const;

	bool operator==(const Strategy&) const = default;
};

struct PipelineStage {
	Strategy strategy;
	std::size_t budget = 1;

	bool operator==(const PipelineStage&) const = default;
};

struct StrategyPipeline {
	std::vector<PipelineStage> stages;

	bool operator==(const StrategyPipeline&) const = default;
};

std::vector<Violation> validate(const StrategyPipeline& pipeline, const MeasureSchema& schema);

/// Consistency, then one evolution stage per measure, one order stage per
/// unordered measure pair, then random. Each structured stage gets budget 1;
/// the random stage is bounded only by the question limit.
StrategyPipeline default_pipeline(const MeasureSchema& schema, std::size_t max_questions);

/// Live elicitation state. One outstanding question at a time.
class Session {
public:
	Session() = default;
	Session(ComparisonSet set, StrategyPipeline pipeline, std::size_t max_questions,
	        std::uint64_t seed, double measure_tolerance = 1.0);

	/// Next comparison to show, or nullopt once the session is finished.
	/// Comparisons that already carry a preference are never shown. Asking again before answering returns the same pending comparison.
	std::optional<Comparison> next_comparison();

	/// Records the answer to the pending comparison.
	/// @throws InvalidInput for an unknown comparison id.
	/// @throws ProtocolError when the id is not the pending question.
	void submit_preference(const Preference& preference);

	bool finished() const;

	const ComparisonSet& set() const noexcept { return set_; }
	const StrategyPipeline& pipeline() const noexcept { return pipeline_; }
	const std::vector<std::string>& asked() const noexcept { return asked_; }
	/// Pipeline stage that selected each asked comparison.
	const std::vector<std::size_t>& asked_stages() const noexcept { return asked_stages_; }
	std::size_t stage_cursor() const noexcept { return stage_cursor_; }
	std::size_t stage_used() const noexcept { return stage_used_; }
	std::size_t max_questions() const noexcept { return max_questions_; }
	std::uint64_t seed() const noexcept { return seed_; }
	double measure_tolerance() const noexcept { return measure_tolerance_; }
	const std::optional<std::string>& pending() const noexcept { return pending_; }
	const std::vector<std::string>& log() const noexcept { return log_; }

	/// Label of the stage the cursor sits on, or "finished".
	std::string stage_label() const;

	/// Rebuilds a session from persisted fields; checks the invariants.
	/// @throws InvalidInput if they do not hold.
	static Session restore(ComparisonSet set, StrategyPipeline pipeline,
	                       std::vector<std::string> asked, std::vector<std::size_t> asked_stages,
	                       std::size_t stage_cursor, std::size_t stage_used,
	                       std::size_t max_questions, std::uint64_t seed,
	                       double measure_tolerance, std::optional<std::string> pending,
	                       std::vector<std::string> log);

	bool operator==(const Session&) const = default;

private:
	bool matches(const Strategy& s, const Comparison& c) const;

	ComparisonSet set_;
	StrategyPipeline pipeline_;
	std::vector<std::string> asked_;
	std::vector<std::size_t> asked_stages_;
	std::size_t stage_cursor_ = 0;
	std::size_t stage_used_ = 0;
	std::size_t max_questions_ = 0;
	std::uint64_t seed_ = 0;
	double measure_tolerance_ = 1.0;
	std::optional<std::string> pending_;
	std::vector<std::string> log_;
};

/// Answered consistency-stage comparisons whose verdict was not a tie: each
/// one hints that the measure set misses something the user sees.
std::vector<std::string> consistency_flags(const Session& session);

/// Same check over a bare set: equal-vector pairs answered with a non-tie verdict.
std::vector<std::string> consistency_flags(const ComparisonSet& set, double measure_tolerance);

const char* to_string(StrategyKind k) noexcept;

}  // namespace prefforge
