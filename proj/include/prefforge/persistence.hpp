/// @file  persistence.hpp
/// @brief JSON documents for every artifact, with versioning and located errors.
///
/// Every top-level document carries `"format_version": "1"`. Objects are
/// written with sorted keys and two-space indentation, so identical values
/// always produce identical bytes. Loading reports
///   - ParseError for malformed JSON, missing fields, or wrong types,
///   - VersionMismatch when `format_version` is absent or unsupported,
///   - InvariantViolation when the decoded values break a domain invariant,
/// each with the JSON path of the offending value.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include <prefforge/comparison_generation.hpp>
#include <prefforge/elicitation.hpp>
#include <prefforge/learner.hpp>
#include <prefforge/measure_model.hpp>
#include <prefforge/objective_function.hpp>
#include <prefforge/oracle_sim.hpp>

namespace prefforge::io {

using Json = nlohmann::json;

inline constexpr std::string_view kFormatVersion = "1";

/// A schema plus the problem instances measured against it.
struct InstanceList {
	MeasureSchema schema;
	std::vector<ProblemInstance> instances;

	bool operator==(const InstanceList&) const = default;
};

/// Simulation settings together with the learner settings they feed.
struct SimulationDocument {
	SimulationConfig simulation;
	LearnConfig learn;

	bool operator==(const SimulationDocument&) const = default;
};

// ---- value encoders (no format_version) -----------------------------------

Json to_json(const MeasureSchema& schema);
Json to_json(const Solution& sol);
Json to_json(const Comparison& c, const MeasureSchema& schema);
Json to_json(const RuleCondition& cond, const MeasureSchema& schema);
Json to_json(const StrategyPipeline& pipeline);
Json to_json(const ErrorSummary& summary);
Json to_json(const GaConfig& cfg);
Json to_json(const PartitionConfig& cfg);
Json to_json(const GenerationConfig& cfg);

/// Set body: `schema`, `comparisons`, `preferences`.
Json set_body(const ComparisonSet& set);
/// Function body: `schema`, `rules`.
Json function_body(const ObjectiveFunction& fn);
Json learn_config_body(const LearnConfig& cfg);
Json report_body(const LearnReport& report);

/// Comparison as the service shows it: id, stage label and both solutions
/// with named measure values.
Json comparison_view(const Comparison& c, const MeasureSchema& schema, const std::string& stage);

// ---- decoders; `path` names the value in error messages --------------------

MeasureSchema schema_from_json(const Json& j, const std::string& path);
ComparisonSet set_from_body(const Json& j, const std::string& path);
ObjectiveFunction function_from_body(const Json& j, const std::string& path);
StrategyPipeline pipeline_from_json(const Json& j, const std::string& path);
LearnConfig learn_config_from_body(const Json& j, const std::string& path);
GenerationConfig generation_config_from_body(const Json& j, const std::string& path);
Verdict verdict_from_json(const Json& j, const std::string& path);

// ---- documents -------------------------------------------------------------

Json to_document(const ComparisonSet& set);
Json to_document(const ObjectiveFunction& fn);
Json to_document(const Session& session);
Json to_document(const LearnReport& report);
Json to_document(const InstanceList& instances);
Json to_document(const LearnConfig& cfg);
Json to_document(const GenerationConfig& cfg);
Json to_document(const OracleConfig& cfg);
Json to_document(const SimulationDocument& doc);
Json to_document(const ClosedLoopReport& report);

ComparisonSet set_from_document(const Json& doc);
ObjectiveFunction function_from_document(const Json& doc);
Session session_from_document(const Json& doc);
LearnReport report_from_document(const Json& doc);
InstanceList instances_from_document(const Json& doc);
LearnConfig learn_config_from_document(const Json& doc);
GenerationConfig generation_config_from_document(const Json& doc);
OracleConfig oracle_from_document(const Json& doc);
SimulationDocument simulation_from_document(const Json& doc);

// ---- text and files --------------------------------------------------------

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& doc);
/// @throws ParseError located at the byte offset of the syntax error.
Json parse(std::string_view text);

Json read_json_file(const std::filesystem::path& path);
/// Writes through a temporary file and renames it into place.
void write_json_file(const std::filesystem::path& path, const Json& doc);
void write_text_file(const std::filesystem::path& path, std::string_view text);

template <class T>
void save(const std::filesystem::path& path, const T& value) {
	write_json_file(path, to_document(value));
}

inline ComparisonSet load_set(const std::filesystem::path& p) { return set_from_document(read_json_file(p)); }
inline ObjectiveFunction load_function(const std::filesystem::path& p) {
	return function_from_document(read_json_file(p));
}
inline Session load_session(const std::filesystem::path& p) { return session_from_document(read_json_file(p)); }
inline LearnReport load_report(const std::filesystem::path& p) { return report_from_document(read_json_file(p)); }
inline InstanceList load_instances(const std::filesystem::path& p) {
	return instances_from_document(read_json_file(p));
}

}  // namespace prefforge::io
