/// @file  elicitation.cpp

#include <prefforge/elicitation.hpp>

#include <algorithm>
#include <random>
#include <set>

#include <prefforge/comparison_generation.hpp>
#include <prefforge/error.hpp>

namespace prefforge {

std::string Strategy::label() const {
	std::string out = to_string(kind);
	if (!measures.empty()) {
		out += "(";
		for (std::size_t i = 0; i < measures.size(); ++i) {
			out += (i ? "," : "") + measures[i];
		}
		out += ")";
	}
	return out;
}

std::vector<Violation> validate(const StrategyPipeline& pipeline, const MeasureSchema& schema) {
	std::vector<Violation> out;
	std::size_t total = 0;
	for (std::size_t i = 0; i < pipeline.stages.size(); ++i) {
		const auto& st = pipeline.stages[i];
		const auto path = "$.pipeline.stages[" + std::to_string(i) + "]";
		total += st.budget;
		std::size_t expected = 0;
		switch (st.strategy.kind) {
		case StrategyKind::Evolution: expected = 1; break;
		case StrategyKind::Order: expected = 2; break;
		default: break;
		}
		if (st.strategy.measures.size() != expected) {
			out.push_back({path + ".measures", "expected " + std::to_string(expected) +
			                                       " measure ids for " + to_string(st.strategy.kind)});
			continue;
		}
		for (const auto& m : st.strategy.measures) {
			if (!schema.index_of(m)) {
				out.push_back({path + ".measures", "unknown measure '" + m + "'"});
			}
		}
		if (expected == 2 && st.strategy.measures[0] == st.strategy.measures[1]) {
			out.push_back({path + ".measures", "ORDER needs two different measures"});
		}
	}
	if (total < 1) {
		out.push_back({"$.pipeline.stages", "total budget must be at least 1"});
	}
	return out;
}

StrategyPipeline default_pipeline(const MeasureSchema& schema, std::size_t max_questions) {
	StrategyPipeline p;
	p.stages.push_back({Strategy::consistency(), 1});
	for (const auto& m : schema.measures) {
		p.stages.push_back({Strategy::evolution(m.id), 1});
	}
	for (std::size_t i = 0; i < schema.size(); ++i) {
		for (std::size_t j = i + 1; j < schema.size(); ++j) {
			p.stages.push_back({Strategy::order(schema.measures[i].id, schema.measures[j].id), 1});
		}
	}
	// The question limit caps the random stage, so it also absorbs whatever
	// budget skipped stages left unused.
	p.stages.push_back({Strategy::random(), std::max<std::size_t>(max_questions, 1)});
	return p;
}

Session::Session(ComparisonSet set, StrategyPipeline pipeline, std::size_t max_questions,
                 std::uint64_t seed, double measure_tolerance)
	: set_(std::move(set)),
	  pipeline_(std::move(pipeline)),
	  max_questions_(max_questions),
	  seed_(seed),
	  measure_tolerance_(measure_tolerance) {
	auto v = validate(pipeline_, set_.schema);
	if (!v.empty()) {
		throw InvalidInput(v.front().path + ": " + v.front().message);
	}
}

bool Session::matches(const Strategy& s, const Comparison& c) const {
	if (s.kind == StrategyKind::Random) {
		return true;
	}
	const auto ps = classify_pair(c.sol1.measures, c.sol2.measures, measure_tolerance_);
	switch (s.kind) {
	case StrategyKind::Consistency:
		return ps.kind == StructureKind::EqualVectors;
	case StrategyKind::Evolution:
		return ps.differing.size() == 1 && set_.schema.index_of(s.measures[0]) == ps.differing[0];
	case StrategyKind::Order: {
		if (ps.differing.size() != 2) {
			return false;
		}
		const auto a = set_.schema.index_of(s.measures[0]);
		const auto b = set_.schema.index_of(s.measures[1]);
		return (a == ps.differing[0] && b == ps.differing[1]) ||
		       (a == ps.differing[1] && b == ps.differing[0]);
	}
	case StrategyKind::Random:
		return true;
	}
	return false;
}

std::optional<Comparison> Session::next_comparison() {
	if (pending_) {
		return *set_.find(*pending_);
	}
	const std::set<std::string> asked(asked_.begin(), asked_.end());
	while (asked_.size() < max_questions_ && stage_cursor_ < pipeline_.stages.size()) {
		const auto& stage = pipeline_.stages[stage_cursor_];
		if (stage_used_ >= stage.budget) {
			++stage_cursor_;
			stage_used_ = 0;
			continue;
		}
		std::vector<const Comparison*> candidates;
		for (const auto& c : set_.comparisons) {
			if (!asked.contains(c.id) && !set_.preferences.contains(c.id) && matches(stage.strategy, c)) {
				candidates.push_back(&c);
			}
		}
		if (candidates.empty()) {
			log_.push_back("stage " + std::to_string(stage_cursor_) + " " + stage.strategy.label() +
			               ": no candidate comparison, skipped");
			++stage_cursor_;
			stage_used_ = 0;
			continue;
		}
		// Draw depends only on (seed, questions asked so far) so a resumed
		// session picks exactly what the original would have.
		std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
		                  static_cast<std::uint32_t>(asked_.size())};
		std::mt19937_64 rng(seq);
		std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
		const Comparison* chosen = candidates[pick(rng)];
		pending_ = chosen->id;
		return *chosen;
	}
	return std::nullopt;
}

void Session::submit_preference(const Preference& preference) {
	if (!set_.find(preference.comparison_id)) {
		throw InvalidInput("unknown comparison '" + preference.comparison_id + "'");
	}
	if (set_.preferences.contains(preference.comparison_id)) {
		throw ProtocolError("comparison '" + preference.comparison_id + "' was already answered");
	}
	if (!pending_ || *pending_ != preference.comparison_id) {
		throw ProtocolError("comparison '" + preference.comparison_id +
		                    "' is not the pending question" +
		                    (pending_ ? " (pending: '" + *pending_ + "')" : std::string()));
	}
	set_.preferences[preference.comparison_id] = preference.verdict;
	asked_.push_back(preference.comparison_id);
	asked_stages_.push_back(stage_cursor_);
	++stage_used_;
	pending_.reset();
}

bool Session::finished() const {
	Session probe = *this;
	return !probe.next_comparison().has_value();
}

std::string Session::stage_label() const {
	if (asked_.size() >= max_questions_ || stage_cursor_ >= pipeline_.stages.size()) {
		return "finished";
	}
	return pipeline_.stages[stage_cursor_].strategy.label();
}

Session Session::restore(ComparisonSet set, StrategyPipeline pipeline,
                         std::vector<std::string> asked, std::vector<std::size_t> asked_stages,
                         std::size_t stage_cursor, std::size_t stage_used,
                         std::size_t max_questions, std::uint64_t seed, double measure_tolerance,
                         std::optional<std::string> pending, std::vector<std::string> log) {
	Session s(std::move(set), std::move(pipeline), max_questions, seed, measure_tolerance);
	if (asked.size() != asked_stages.size()) {
		throw InvalidInput("asked and asked_stages differ in length");
	}
	if (asked.size() > max_questions) {
		throw InvalidInput("more questions asked than max_questions");
	}
	std::set<std::string> seen;
	for (const auto& id : asked) {
		if (!s.set_.find(id)) {
			throw InvalidInput("asked comparison '" + id + "' is not in the set");
		}
		if (!seen.insert(id).second) {
			throw InvalidInput("comparison '" + id + "' asked twice");
		}
		if (!s.set_.preferences.contains(id)) {
			throw InvalidInput("asked comparison '" + id + "' has no preference");
		}
	}
	if (!std::is_sorted(asked_stages.begin(), asked_stages.end())) {
		throw InvalidInput("asked_stages must be non-decreasing");
	}
	if (stage_cursor > s.pipeline_.stages.size()) {
		throw InvalidInput("stage cursor past the end of the pipeline");
	}
	if (pending && (!s.set_.find(*pending) || s.set_.preferences.contains(*pending))) {
		throw InvalidInput("pending comparison '" + *pending + "' is unknown or already answered");
	}
	s.asked_ = std::move(asked);
	s.asked_stages_ = std::move(asked_stages);
	s.stage_cursor_ = stage_cursor;
	s.stage_used_ = stage_used;
	s.pending_ = std::move(pending);
	s.log_ = std::move(log);
	return s;
}

std::vector<std::string> consistency_flags(const Session& session) {
	std::vector<std::string> out;
	const auto& stages = session.pipeline().stages;
	for (std::size_t i = 0; i < session.asked().size(); ++i) {
		const std::size_t st = session.asked_stages()[i];
		if (st >= stages.size() || stages[st].strategy.kind != StrategyKind::Consistency) {
			continue;
		}
		const auto& id = session.asked()[i];
		auto it = session.set().preferences.find(id);
		if (it != session.set().preferences.end() && it->second != Verdict::Tie) {
			out.push_back(id);
		}
	}
	return out;
}

std::vector<std::string> consistency_flags(const ComparisonSet& set, double measure_tolerance) {
	std::vector<std::string> out;
	for (const auto& c : set.comparisons) {
		auto it = set.preferences.find(c.id);
		if (it == set.preferences.end() || it->second == Verdict::Tie) {
			continue;
		}
		if (classify_pair(c.sol1.measures, c.sol2.measures, measure_tolerance).kind ==
		    StructureKind::EqualVectors) {
			out.push_back(c.id);
		}
	}
	return out;
}

const char* to_string(StrategyKind k) noexcept {
	switch (k) {
	case StrategyKind::Consistency: return "CONSISTENCY";
	case StrategyKind::Evolution: return "EVOLUTION";
	case StrategyKind::Order: return "ORDER";
	case StrategyKind::Random: return "RANDOM";
	}
	return "RANDOM";
}

}  // namespace prefforge
