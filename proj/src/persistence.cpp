/// @file  persistence.cpp

#include <prefforge/persistence.hpp>

#include <fstream>
#include <sstream>

#include <prefforge/error.hpp>

namespace prefforge::io {

namespace {

/// A JSON value plus its path, for error messages.
class Node {
public:
	Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

	const std::string& path() const { return path_; }
	const Json& json() const { return j_; }

	Node at(const std::string& key) const {
		require_object();
		auto it = j_.find(key);
		if (it == j_.end()) {
			throw ParseError(path_ + "." + key, "missing field");
		}
		return Node(*it, path_ + "." + key);
	}

	bool has(const std::string& key) const {
		require_object();
		return j_.contains(key) && !j_.at(key).is_null();
	}

	Node at(std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

	std::size_t size() const {
		if (!j_.is_array()) {
			throw ParseError(path_, "expected an array");
		}
		return j_.size();
	}

	std::string str() const {
		if (!j_.is_string()) {
			throw ParseError(path_, "expected a string");
		}
		return j_.get<std::string>();
	}

	double number() const {
		if (!j_.is_number()) {
			throw ParseError(path_, "expected a number");
		}
		return j_.get<double>();
	}

	std::uint64_t u64() const {
		if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<std::int64_t>() >= 0)) {
			throw ParseError(path_, "expected a non-negative integer");
		}
		return j_.get<std::uint64_t>();
	}

	int integer() const {
		if (!j_.is_number_integer()) {
			throw ParseError(path_, "expected an integer");
		}
		return j_.get<int>();
	}

	bool boolean() const {
		if (!j_.is_boolean()) {
			throw ParseError(path_, "expected a boolean");
		}
		return j_.get<bool>();
	}

	void require_object() const {
		if (!j_.is_object()) {
			throw ParseError(path_, "expected an object");
		}
	}

	// Optional fields fall back to the current value.
	void opt(const std::string& key, double& out) const { if (has(key)) out = at(key).number(); }
	void opt(const std::string& key, std::size_t& out) const {
		if (has(key)) out = static_cast<std::size_t>(at(key).u64());
	}
	void opt(const std::string& key, int& out) const { if (has(key)) out = at(key).integer(); }
	void opt(const std::string& key, bool& out) const { if (has(key)) out = at(key).boolean(); }

private:
	const Json& j_;
	std::string path_;
};

void check_version(const Json& doc) {
	if (!doc.is_object()) {
		throw ParseError("$", "expected a JSON object document");
	}
	auto it = doc.find("format_version");
	if (it == doc.end()) {
		throw VersionMismatch("$.format_version", "missing format_version (expected \"" +
		                                              std::string(kFormatVersion) + "\")");
	}
	if (!it->is_string() || it->get<std::string>() != kFormatVersion) {
		throw VersionMismatch("$.format_version", "unsupported format_version " + it->dump() +
		                                              " (expected \"" + std::string(kFormatVersion) +
		                                              "\")");
	}
}

Json versioned(Json body) {
	body["format_version"] = std::string(kFormatVersion);
	return body;
}

/// Re-roots a violation path ("$.x") under @p base ("$.set" -> "$.set.x").
std::string reroot(const std::string& base, const std::string& path) {
	if (base == "$") {
		return path;
	}
	return base + path.substr(1);
}

void throw_first(const std::vector<Violation>& v, const std::string& base) {
	if (!v.empty()) {
		throw InvariantViolation(reroot(base, v.front().path), v.front().message);
	}
}

Solution solution_from(const Node& n) {
	Solution s;
	s.id = n.at("id").str();
	s.instance_id = n.at("instance_id").str();
	const Node m = n.at("measures");
	for (std::size_t i = 0; i < m.size(); ++i) {
		s.measures.push_back(m.at(i).number());
	}
	if (n.has("display")) {
		s.display = n.at("display").str();
	}
	return s;
}

RuleCondition condition_from(const Node& n, const MeasureSchema& schema) {
	RuleCondition cond;
	for (std::size_t k = 0; k < n.size(); ++k) {
		const Node c = n.at(k);
		const Node mn = c.at("measure");
		auto idx = schema.index_of(mn.str());
		if (!idx) {
			throw InvariantViolation(mn.path(), "unknown measure '" + mn.str() + "'");
		}
		Relation rel;
		const Node op = c.at("op");
		if (!parse_relation(op.str(), rel)) {
			throw ParseError(op.path(), "unknown relation '" + op.str() + "'");
		}
		cond.clauses.push_back({*idx, rel, c.at("threshold").number()});
	}
	return cond;
}

Strategy strategy_from(const Node& n) {
	Strategy s;
	const Node kind = n.at("strategy");
	const std::string k = kind.str();
	if (k == "CONSISTENCY") s.kind = StrategyKind::Consistency;
	else if (k == "EVOLUTION") s.kind = StrategyKind::Evolution;
	else if (k == "ORDER") s.kind = StrategyKind::Order;
	else if (k == "RANDOM") s.kind = StrategyKind::Random;
	else throw ParseError(kind.path(), "unknown strategy '" + k + "'");
	if (n.has("measures")) {
		const Node m = n.at("measures");
		for (std::size_t i = 0; i < m.size(); ++i) {
			s.measures.push_back(m.at(i).str());
		}
	}
	return s;
}

GaConfig ga_from(const Node& n) {
	GaConfig cfg;
	n.require_object();
	n.opt("population_size", cfg.population_size);
	n.opt("generations", cfg.generations);
	n.opt("mutation_rate", cfg.mutation_rate);
	n.opt("crossover_rate", cfg.crossover_rate);
	n.opt("elitism_count", cfg.elitism_count);
	n.opt("tournament_size", cfg.tournament_size);
	n.opt("weight_min", cfg.weight_min);
	n.opt("weight_max", cfg.weight_max);
	n.opt("early_stop", cfg.early_stop);
	n.opt("consensus", cfg.consensus);
	if (n.has("seed")) cfg.seed = n.at("seed").u64();
	return cfg;
}

PartitionConfig partition_from(const Node& n) {
	PartitionConfig cfg;
	n.require_object();
	n.opt("min_rule_coverage", cfg.min_rule_coverage);
	n.opt("max_clauses_per_rule", cfg.max_clauses_per_rule);
	n.opt("max_rules", cfg.max_rules);
	n.opt("prune_holdout_fraction", cfg.prune_holdout_fraction);
	if (n.has("seed")) cfg.seed = n.at("seed").u64();
	return cfg;
}

std::vector<std::string> strings_from(const Node& n) {
	std::vector<std::string> out;
	for (std::size_t i = 0; i < n.size(); ++i) {
		out.push_back(n.at(i).str());
	}
	return out;
}

}  // namespace

// ---- encoders --------------------------------------------------------------

Json to_json(const MeasureSchema& schema) {
	Json measures = Json::array();
	for (const auto& m : schema.measures) {
		measures.push_back({{"id", m.id}, {"label", m.label}});
	}
	return {{"measures", measures}, {"val_min", schema.val_min}, {"val_max", schema.val_max}};
}

Json to_json(const Solution& sol) {
	Json j{{"id", sol.id}, {"instance_id", sol.instance_id}, {"measures", sol.measures}};
	if (sol.display) {
		j["display"] = *sol.display;
	}
	return j;
}

Json to_json(const Comparison& c, const MeasureSchema&) {
	return {{"id", c.id}, {"sol1", to_json(c.sol1)}, {"sol2", to_json(c.sol2)}};
}

Json to_json(const RuleCondition& cond, const MeasureSchema& schema) {
	Json out = Json::array();
	for (const auto& cl : cond.clauses) {
		out.push_back({{"measure", schema.measures.at(cl.measure).id},
		               {"op", to_string(cl.relation)},
		               {"threshold", cl.threshold}});
	}
	return out;
}

Json to_json(const StrategyPipeline& pipeline) {
	Json stages = Json::array();
	for (const auto& st : pipeline.stages) {
		stages.push_back({{"strategy", to_string(st.strategy.kind)},
		                  {"measures", st.strategy.measures},
		                  {"budget", st.budget}});
	}
	return {{"stages", stages}};
}

Json to_json(const ErrorSummary& s) {
	return {{"global_error", s.global_error}, {"incompatible", s.incompatible}, {"comparisons", s.comparisons}};
}

Json to_json(const GaConfig& c) {
	return {{"population_size", c.population_size}, {"generations", c.generations},
	        {"mutation_rate", c.mutation_rate},     {"crossover_rate", c.crossover_rate},
	        {"elitism_count", c.elitism_count},     {"tournament_size", c.tournament_size},
	        {"weight_min", c.weight_min},           {"weight_max", c.weight_max},
	        {"early_stop", c.early_stop},           {"consensus", c.consensus},
	        {"seed", c.seed}};
}

Json to_json(const PartitionConfig& c) {
	return {{"min_rule_coverage", c.min_rule_coverage},
	        {"max_clauses_per_rule", c.max_clauses_per_rule},
	        {"max_rules", c.max_rules},
	        {"prune_holdout_fraction", c.prune_holdout_fraction},
	        {"seed", c.seed}};
}

Json to_json(const GenerationConfig& c) {
	const auto& q = c.structured_pair_quotas;
	return {{"max_instances", c.max_instances},
	        {"pairs_per_instance", c.pairs_per_instance},
	        {"structured_pair_quotas",
	         {{"equal_vectors", q.equal_vectors},
	          {"one_measure_differs", q.one_measure_differs},
	          {"two_measures_differ", q.two_measures_differ},
	          {"unconstrained", q.unconstrained}}},
	        {"measure_tolerance", c.measure_tolerance},
	        {"seed", c.seed}};
}

Json set_body(const ComparisonSet& set) {
	Json comparisons = Json::array();
	for (const auto& c : set.comparisons) {
		comparisons.push_back(to_json(c, set.schema));
	}
	Json prefs = Json::object();
	for (const auto& [id, v] : set.preferences) {
		prefs[id] = to_string(v);
	}
	return {{"schema", to_json(set.schema)}, {"comparisons", comparisons}, {"preferences", prefs}};
}

Json function_body(const ObjectiveFunction& fn) {
	Json rules = Json::array();
	for (const auto& r : fn.rules) {
		rules.push_back({{"condition", to_json(r.condition, fn.schema)}, {"weights", r.weights}});
	}
	return {{"schema", to_json(fn.schema)}, {"rules", rules}};
}

Json learn_config_body(const LearnConfig& c) {
	return {{"val_error", c.error.val_error},
	        {"tie_epsilon", c.error.tie_epsilon},
	        {"measure_tolerance", c.measure_tolerance},
	        {"max_depth", c.max_depth},
	        {"seed", c.seed},
	        {"trace", c.trace},
	        {"ga", to_json(c.ga)},
	        {"partition", to_json(c.partition)}};
}

Json report_body(const LearnReport& r) {
	Json iterations = Json::array();
	for (const auto& it : r.iterations) {
		Json j{{"iteration", it.iteration},       {"rules", it.rules},
		       {"global_error", it.global_error}, {"incompatible", it.incompatible},
		       {"accepted", it.accepted}};
		if (!it.ga_trace.empty()) {
			j["ga_trace"] = it.ga_trace;
		}
		iterations.push_back(std::move(j));
	}
	Json out{{"iterations", iterations},
	         {"accepted_errors", r.accepted_errors},
	         {"final_error", r.final_error},
	         {"final_incompatible", r.final_incompatible},
	         {"comparisons", r.comparisons},
	         {"consistency_flags", r.consistency_flags},
	         {"stop_reason", r.stop_reason},
	         {"depth_cap_hit", r.depth_cap_hit}};
	if (r.wall_time_ms) {
		out["wall_time_ms"] = *r.wall_time_ms;
	}
	return out;
}

Json comparison_view(const Comparison& c, const MeasureSchema& schema, const std::string& stage) {
	auto side = [&](const Solution& s) {
		Json measures = Json::array();
		for (std::size_t i = 0; i < schema.size() && i < s.measures.size(); ++i) {
			measures.push_back({{"id", schema.measures[i].id},
			                    {"label", schema.measures[i].label},
			                    {"value", s.measures[i]}});
		}
		Json j{{"id", s.id}, {"instance_id", s.instance_id}, {"measures", measures}};
		j["display"] = s.display ? Json(*s.display) : Json(nullptr);
		return j;
	};
	return {{"comparison_id", c.id}, {"stage", stage}, {"sol1", side(c.sol1)}, {"sol2", side(c.sol2)}};
}

// ---- decoders --------------------------------------------------------------

MeasureSchema schema_from_json(const Json& j, const std::string& path) {
	const Node n(j, path);
	MeasureSchema s;
	const Node ms = n.at("measures");
	for (std::size_t i = 0; i < ms.size(); ++i) {
		const Node m = ms.at(i);
		Measure meas;
		meas.id = m.at("id").str();
		if (m.has("label")) {
			meas.label = m.at("label").str();
		}
		s.measures.push_back(std::move(meas));
	}
	s.val_min = n.at("val_min").number();
	s.val_max = n.at("val_max").number();
	return s;
}

Verdict verdict_from_json(const Json& j, const std::string& path) {
	const Node n(j, path);
	auto v = parse_verdict(n.str());
	if (!v) {
		throw ParseError(path, "unknown verdict '" + n.str() + "'");
	}
	return *v;
}

ComparisonSet set_from_body(const Json& j, const std::string& path) {
	const Node n(j, path);
	ComparisonSet set;
	set.schema = schema_from_json(n.at("schema").json(), n.at("schema").path());
	const Node cs = n.at("comparisons");
	for (std::size_t i = 0; i < cs.size(); ++i) {
		const Node c = cs.at(i);
		set.comparisons.push_back({c.at("id").str(), solution_from(c.at("sol1")), solution_from(c.at("sol2"))});
	}
	const Node prefs = n.at("preferences");
	prefs.require_object();
	for (const auto& [id, v] : prefs.json().items()) {
		set.preferences[id] = verdict_from_json(v, prefs.path() + "." + id);
	}
	throw_first(validate(set), path);
	return set;
}

ObjectiveFunction function_from_body(const Json& j, const std::string& path) {
	const Node n(j, path);
	ObjectiveFunction fn;
	fn.schema = schema_from_json(n.at("schema").json(), n.at("schema").path());
	const Node rules = n.at("rules");
	for (std::size_t r = 0; r < rules.size(); ++r) {
		const Node rule = rules.at(r);
		RegressionRule rr;
		rr.condition = condition_from(rule.at("condition"), fn.schema);
		const Node w = rule.at("weights");
		for (std::size_t i = 0; i < w.size(); ++i) {
			rr.weights.push_back(w.at(i).integer());
		}
		fn.rules.push_back(std::move(rr));
	}
	throw_first(validate(fn), path);
	return fn;
}

StrategyPipeline pipeline_from_json(const Json& j, const std::string& path) {
	const Node n(j, path);
	StrategyPipeline p;
	const Node stages = n.at("stages");
	for (std::size_t i = 0; i < stages.size(); ++i) {
		const Node st = stages.at(i);
		p.stages.push_back({strategy_from(st), static_cast<std::size_t>(st.at("budget").u64())});
	}
	return p;
}

LearnConfig learn_config_from_body(const Json& j, const std::string& path) {
	const Node n(j, path);
	n.require_object();
	LearnConfig c;
	n.opt("val_error", c.error.val_error);
	n.opt("tie_epsilon", c.error.tie_epsilon);
	n.opt("measure_tolerance", c.measure_tolerance);
	n.opt("max_depth", c.max_depth);
	n.opt("trace", c.trace);
	if (n.has("seed")) c.seed = n.at("seed").u64();
	if (n.has("ga")) c.ga = ga_from(n.at("ga"));
	if (n.has("partition")) c.partition = partition_from(n.at("partition"));
	throw_first(validate(c), path);
	return c;
}

GenerationConfig generation_config_from_body(const Json& j, const std::string& path) {
	const Node n(j, path);
	n.require_object();
	GenerationConfig c;
	n.opt("max_instances", c.max_instances);
	n.opt("pairs_per_instance", c.pairs_per_instance);
	n.opt("measure_tolerance", c.measure_tolerance);
	if (n.has("seed")) c.seed = n.at("seed").u64();
	if (n.has("structured_pair_quotas")) {
		const Node q = n.at("structured_pair_quotas");
		q.require_object();
		q.opt("equal_vectors", c.structured_pair_quotas.equal_vectors);
		q.opt("one_measure_differs", c.structured_pair_quotas.one_measure_differs);
		q.opt("two_measures_differ", c.structured_pair_quotas.two_measures_differ);
		q.opt("unconstrained", c.structured_pair_quotas.unconstrained);
	}
	if (c.max_instances < 1) throw InvariantViolation(path + ".max_instances", "must be at least 1");
	if (c.pairs_per_instance < 1) {
		throw InvariantViolation(path + ".pairs_per_instance", "must be at least 1");
	}
	if (!(c.measure_tolerance >= 0.0)) {
		throw InvariantViolation(path + ".measure_tolerance", "must be >= 0");
	}
	return c;
}

// ---- documents -------------------------------------------------------------

Json to_document(const ComparisonSet& set) { return versioned(set_body(set)); }
Json to_document(const ObjectiveFunction& fn) { return versioned(function_body(fn)); }
Json to_document(const LearnReport& report) { return versioned(report_body(report)); }
Json to_document(const LearnConfig& cfg) { return versioned(learn_config_body(cfg)); }
Json to_document(const GenerationConfig& cfg) { return versioned(to_json(cfg)); }

Json to_document(const Session& s) {
	return versioned({{"set", set_body(s.set())},
	                  {"pipeline", to_json(s.pipeline())},
	                  {"asked", s.asked()},
	                  {"asked_stages", s.asked_stages()},
	                  {"stage_cursor", s.stage_cursor()},
	                  {"stage_used", s.stage_used()},
	                  {"max_questions", s.max_questions()},
	                  {"seed", s.seed()},
	                  {"measure_tolerance", s.measure_tolerance()},
	                  {"pending", s.pending() ? Json(*s.pending()) : Json(nullptr)},
	                  {"log", s.log()}});
}

Json to_document(const InstanceList& list) {
	Json instances = Json::array();
	for (const auto& inst : list.instances) {
		Json sols = Json::array();
		for (const auto& s : inst.solutions) {
			sols.push_back(to_json(s));
		}
		instances.push_back({{"id", inst.id}, {"description", inst.description}, {"solutions", sols}});
	}
	return versioned({{"schema", to_json(list.schema)}, {"instances", instances}});
}

Json to_document(const OracleConfig& cfg) {
	return versioned({{"ground_truth", function_body(cfg.ground_truth)},
	                  {"tie_band", cfg.tie_band},
	                  {"flip_probability", cfg.flip_probability},
	                  {"seed", cfg.seed}});
}

Json to_document(const SimulationDocument& d) {
	const auto& s = d.simulation;
	return versioned({{"generation", to_json(s.generation)},
	                  {"max_questions", s.max_questions},
	                  {"test_comparisons", s.test_comparisons},
	                  {"train_fraction", s.train_fraction},
	                  {"seed", s.seed},
	                  {"learn", learn_config_body(d.learn)}});
}

Json to_document(const ClosedLoopReport& r) {
	return versioned({{"function", function_body(r.learned.function)},
	                  {"learn_report", report_body(r.learned.report)},
	                  {"train", to_json(r.train)},
	                  {"test", to_json(r.test)},
	                  {"consistency_flags", r.consistency_flags},
	                  {"session_log", r.session_log}});
}

ComparisonSet set_from_document(const Json& doc) {
	check_version(doc);
	return set_from_body(doc, "$");
}

ObjectiveFunction function_from_document(const Json& doc) {
	check_version(doc);
	return function_from_body(doc, "$");
}

Session session_from_document(const Json& doc) {
	check_version(doc);
	const Node n(doc, "$");
	ComparisonSet set = set_from_body(n.at("set").json(), "$.set");
	StrategyPipeline pipeline = pipeline_from_json(n.at("pipeline").json(), "$.pipeline");
	throw_first(validate(pipeline, set.schema), "$");
	std::vector<std::size_t> stages;
	const Node st = n.at("asked_stages");
	for (std::size_t i = 0; i < st.size(); ++i) {
		stages.push_back(static_cast<std::size_t>(st.at(i).u64()));
	}
	std::optional<std::string> pending;
	if (n.has("pending")) {
		pending = n.at("pending").str();
	}
	try {
		return Session::restore(std::move(set), std::move(pipeline), strings_from(n.at("asked")),
		                        std::move(stages), static_cast<std::size_t>(n.at("stage_cursor").u64()),
		                        static_cast<std::size_t>(n.at("stage_used").u64()),
		                        static_cast<std::size_t>(n.at("max_questions").u64()),
		                        n.at("seed").u64(), n.at("measure_tolerance").number(), std::move(pending),
		                        strings_from(n.at("log")));
	} catch (const InvalidInput& e) {
		throw InvariantViolation("$", e.what());
	}
}

LearnReport report_from_document(const Json& doc) {
	check_version(doc);
	const Node n(doc, "$");
	LearnReport r;
	const Node its = n.at("iterations");
	for (std::size_t i = 0; i < its.size(); ++i) {
		const Node it = its.at(i);
		IterationRecord rec;
		rec.iteration = static_cast<std::size_t>(it.at("iteration").u64());
		rec.rules = static_cast<std::size_t>(it.at("rules").u64());
		rec.global_error = it.at("global_error").number();
		rec.incompatible = static_cast<std::size_t>(it.at("incompatible").u64());
		rec.accepted = it.at("accepted").boolean();
		if (it.has("ga_trace")) {
			const Node t = it.at("ga_trace");
			for (std::size_t k = 0; k < t.size(); ++k) {
				rec.ga_trace.push_back(t.at(k).number());
			}
		}
		r.iterations.push_back(std::move(rec));
	}
	const Node acc = n.at("accepted_errors");
	for (std::size_t i = 0; i < acc.size(); ++i) {
		r.accepted_errors.push_back(acc.at(i).number());
	}
	r.final_error = n.at("final_error").number();
	r.final_incompatible = static_cast<std::size_t>(n.at("final_incompatible").u64());
	r.comparisons = static_cast<std::size_t>(n.at("comparisons").u64());
	r.consistency_flags = strings_from(n.at("consistency_flags"));
	r.stop_reason = n.at("stop_reason").str();
	r.depth_cap_hit = n.at("depth_cap_hit").boolean();
	if (n.has("wall_time_ms")) {
		r.wall_time_ms = n.at("wall_time_ms").number();
	}
	return r;
}

InstanceList instances_from_document(const Json& doc) {
	check_version(doc);
	const Node n(doc, "$");
	InstanceList list;
	list.schema = schema_from_json(n.at("schema").json(), "$.schema");
	throw_first(validate(list.schema), "$");
	const Node insts = n.at("instances");
	for (std::size_t i = 0; i < insts.size(); ++i) {
		const Node in = insts.at(i);
		ProblemInstance inst;
		inst.id = in.at("id").str();
		if (in.has("description")) {
			inst.description = in.at("description").str();
		}
		const Node sols = in.at("solutions");
		for (std::size_t k = 0; k < sols.size(); ++k) {
			inst.solutions.push_back(solution_from(sols.at(k)));
		}
		// Instances with fewer than two solutions are tolerated here; the
		// generator skips them with a warning.
		for (std::size_t k = 0; k < inst.solutions.size(); ++k) {
			const auto sp = in.path() + ".solutions[" + std::to_string(k) + "]";
			if (inst.solutions[k].instance_id != inst.id) {
				throw InvariantViolation(sp + ".instance_id", "solution belongs to instance '" +
				                                                  inst.solutions[k].instance_id + "'");
			}
			throw_first(validate(list.schema, inst.solutions[k], sp), "$");
		}
		list.instances.push_back(std::move(inst));
	}
	return list;
}

LearnConfig learn_config_from_document(const Json& doc) {
	check_version(doc);
	return learn_config_from_body(doc, "$");
}

GenerationConfig generation_config_from_document(const Json& doc) {
	check_version(doc);
	return generation_config_from_body(doc, "$");
}

OracleConfig oracle_from_document(const Json& doc) {
	check_version(doc);
	const Node n(doc, "$");
	OracleConfig cfg;
	cfg.ground_truth = function_from_body(n.at("ground_truth").json(), "$.ground_truth");
	n.opt("tie_band", cfg.tie_band);
	n.opt("flip_probability", cfg.flip_probability);
	if (n.has("seed")) cfg.seed = n.at("seed").u64();
	throw_first(validate(cfg), "$");
	return cfg;
}

SimulationDocument simulation_from_document(const Json& doc) {
	check_version(doc);
	const Node n(doc, "$");
	SimulationDocument d;
	auto& s = d.simulation;
	if (n.has("generation")) {
		s.generation = generation_config_from_body(n.at("generation").json(), "$.generation");
	}
	n.opt("max_questions", s.max_questions);
	n.opt("test_comparisons", s.test_comparisons);
	n.opt("train_fraction", s.train_fraction);
	if (n.has("seed")) s.seed = n.at("seed").u64();
	if (n.has("learn")) {
		d.learn = learn_config_from_body(n.at("learn").json(), "$.learn");
	}
	throw_first(validate(s), "$");
	return d;
}

// ---- text and files --------------------------------------------------------

std::string dump(const Json& doc) {
	return doc.dump(2, ' ', false, Json::error_handler_t::strict) + "\n";
}

Json parse(std::string_view text) {
	try {
		return Json::parse(text);
	} catch (const Json::parse_error& e) {
		throw ParseError("$", "byte " + std::to_string(e.byte) + ": " + e.what());
	}
}

Json read_json_file(const std::filesystem::path& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw Error("cannot open '" + path.string() + "' for reading");
	}
	std::ostringstream buf;
	buf << in.rdbuf();
	return parse(buf.str());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
	auto tmp = path;
	tmp += ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out) {
			throw Error("cannot open '" + tmp.string() + "' for writing");
		}
		out.write(text.data(), static_cast<std::streamsize>(text.size()));
		if (!out) {
			throw Error("write to '" + tmp.string() + "' failed");
		}
	}
	std::filesystem::rename(tmp, path);
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
	write_text_file(path, dump(doc));
}

}  // namespace prefforge::io
