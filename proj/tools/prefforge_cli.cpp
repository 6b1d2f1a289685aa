/// @file  prefforge_cli.cpp
/// @brief `prefforge` command-line tool.
///
/// Exit codes: 0 success, 1 usage, 2 validation (bad document or input),
/// 3 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <prefforge/comparison_generation.hpp>
#include <prefforge/elicitation.hpp>
#include <prefforge/error.hpp>
#include <prefforge/learner.hpp>
#include <prefforge/oracle_sim.hpp>
#include <prefforge/building_fixture.hpp>
#include <prefforge/partitioner.hpp>
#include <prefforge/persistence.hpp>
#include <prefforge/service.hpp>

namespace fs = std::filesystem;
using namespace prefforge;

namespace {

constexpr int kUsage = 1;
constexpr int kValidation = 2;
constexpr int kRuntime = 3;

struct Options {
	std::string instances, config, out, set, function, oracle, report, session, debug_examples;
	std::string host = "127.0.0.1", state_dir, out_dir, measures;
	std::size_t max_questions = 50, count = 40, solutions = 6;
	std::uint64_t seed = 1;
	double val_error = 40.0, tie_epsilon = 0.5;
	bool trace = false, wall_time = false;
	int port = 8080;
	GradedModel graded;
};

std::string report_path_for(const Options& o) {
	if (!o.report.empty()) return o.report;
	fs::path p(o.out);
	return (p.parent_path() / (p.stem().string() + ".report.json")).string();
}

void print_summary(const ErrorSummary& s) {
	std::printf("incompatible: %zu, global_error: %.6g\n", s.incompatible, s.global_error);
}

int run_generate(const Options& o) {
	const auto list = io::load_instances(o.instances);
	const GenerationConfig cfg =
	    o.config.empty() ? GenerationConfig{} : io::generation_config_from_document(io::read_json_file(o.config));
	const auto gen = generate_comparisons(list.schema, list.instances, cfg);
	for (const auto& w : gen.warnings) {
		std::cerr << "warning: " << w << '\n';
	}
	io::save(o.out, gen.set);
	std::cout << gen.set.comparisons.size() << " comparisons written to " << o.out << '\n';
	return 0;
}

const char* verdict_prompt = "Which is better? [1] first, [2] second, [t] equal, [q] quit: ";

void show(const Comparison& c, const MeasureSchema& schema, const std::string& stage) {
	std::cout << "\n== " << c.id << "  (" << stage << ")\n";
	std::printf("  %-14s %10s %10s\n", "measure", "1", "2");
	for (std::size_t i = 0; i < schema.size(); ++i) {
		std::printf("  %-14s %10.2f %10.2f\n", schema.measures[i].label.c_str(), c.sol1.measures[i],
		            c.sol2.measures[i]);
	}
}

int run_elicit(const Options& o) {
	const std::string out = o.out.empty() ? o.set : o.out;
	Session session;
	if (!o.session.empty() && fs::exists(o.session)) {
		session = io::load_session(o.session);
	} else {
		ComparisonSet set = io::load_set(o.set);
		StrategyPipeline pipeline = default_pipeline(set.schema, o.max_questions);
		session = Session(std::move(set), std::move(pipeline), o.max_questions, o.seed);
	}
	auto save = [&] {
		io::save(out, session.set());
		if (!o.session.empty()) io::save(o.session, session);
	};

	std::string line;
	while (auto c = session.next_comparison()) {
		show(*c, session.set().schema, session.stage_label());
		std::optional<Verdict> verdict;
		while (!verdict) {
			std::cout << verdict_prompt << std::flush;
			if (!std::getline(std::cin, line) || line == "q") {
				save();
				std::cout << "\nstopped after " << session.asked().size() << " answers\n";
				return 0;
			}
			if (line == "1") verdict = Verdict::PreferSol1;
			else if (line == "2") verdict = Verdict::PreferSol2;
			else if (line == "t") verdict = Verdict::Tie;
		}
		session.submit_preference({c->id, *verdict});
		save();
	}
	save();
	std::cout << "\nsession finished: " << session.asked().size() << " answers saved to " << out << '\n';
	for (const auto& f : consistency_flags(session)) {
		std::cout << "consistency flag: " << f << " (measures may be insufficient)\n";
	}
	return 0;
}

int run_learn(const Options& o) {
	const ComparisonSet set = io::load_set(o.set);
	LearnConfig cfg = o.config.empty() ? LearnConfig{} : io::learn_config_from_document(io::read_json_file(o.config));
	cfg.error.val_error = o.val_error;
	cfg.seed = o.seed;
	cfg.trace = cfg.trace || o.trace;
	LearnResult r = learn_objective(set, cfg);
	if (!o.wall_time) {
		r.report.wall_time_ms.reset();
	}
	io::save(o.out, r.function);
	io::save(report_path_for(o), r.report);
	if (!o.debug_examples.empty()) {
		std::ofstream csv(o.debug_examples);
		write_examples_csv(csv, set.schema, label_solutions(r.function, set, cfg.error));
	}
	std::cout << render_rules(r.function);
	print_summary({r.report.final_error, r.report.final_incompatible, r.report.comparisons});
	return 0;
}

int run_eval(const Options& o) {
	const auto fn = io::load_function(o.function);
	const auto set = io::load_set(o.set);
	print_summary(global_error(fn, set, ErrorConfig{o.val_error, o.tie_epsilon}));
	return 0;
}

int run_simulate(const Options& o) {
	const auto list = io::load_instances(o.instances);
	const auto oracle = io::oracle_from_document(io::read_json_file(o.oracle));
	const auto sim = o.config.empty() ? io::SimulationDocument{}
	                                  : io::simulation_from_document(io::read_json_file(o.config));
	ClosedLoopReport r = run_closed_loop(list.schema, list.instances, sim.simulation, oracle, sim.learn);
	if (!o.wall_time) {
		r.learned.report.wall_time_ms.reset();
	}
	if (!o.out.empty()) {
		io::save(o.out, r);
	}
	std::cout << render_rules(r.learned.function);
	std::cout << "train ";
	print_summary(r.train);
	std::cout << "test  ";
	print_summary(r.test);
	return 0;
}

int run_serve(const Options& o) {
	service::ServiceConfig cfg;
	if (!o.state_dir.empty()) cfg.state_dir = o.state_dir;
	service::Service svc(cfg);
	service::HttpServer http(svc);
	const int port = o.port == 0 ? http.bind_to_any_port(o.host) : http.bind(o.host, o.port);
	if (port < 0) {
		std::cerr << "error: cannot bind " << o.host << ':' << o.port << '\n';
		return kRuntime;
	}
	std::cout << "listening on http://" << o.host << ':' << port << std::endl;
	return http.listen_after_bind() ? 0 : kRuntime;
}

int run_render(const Options& o) {
	std::cout << render_rules(io::load_function(o.function));
	return 0;
}

int run_synth(const Options& o) {
	MeasureSchema schema = fixture::building_schema();
	if (!o.measures.empty()) {
		schema.measures.clear();
		std::stringstream ss(o.measures);
		for (std::string id; std::getline(ss, id, ',');) {
			schema.measures.push_back({id, id});
		}
	}
	if (auto v = validate(schema); !v.empty()) {
		throw InvalidInput(v.front().path + ": " + v.front().message);
	}
	io::InstanceList list{schema, synthesize_graded_instances(schema, o.count, o.solutions, o.graded, o.seed)};
	io::save(o.out, list);
	std::cout << list.instances.size() << " instances written to " << o.out << '\n';
	return 0;
}

int run_fixture(const Options& o) {
	const fs::path dir(o.out_dir);
	fs::create_directories(dir);
	const auto fn = fixture::building_function();
	const auto learning = fixture::make_fixture_set(fn, fixture::learning_spec());
	const auto test = fixture::make_fixture_set(fn, fixture::test_spec());
	io::save(dir / "function.json", fn);
	io::save(dir / "learning_set.json", learning);
	io::save(dir / "test_set.json", test);
	std::cout << "learning ";
	print_summary(global_error(fn, learning, {}));
	std::cout << "test     ";
	print_summary(global_error(fn, test, {}));
	return 0;
}

}  // namespace

int main(int argc, char** argv) {
	CLI::App app{"prefforge: learn an objective function from pairwise preferences"};
	app.require_subcommand(1);
	Options o;

	auto* generate = app.add_subcommand("generate", "Build a comparison set from problem instances");
	generate->add_option("--instances", o.instances, "Instance list document")->required()->check(CLI::ExistingFile);
	generate->add_option("--config", o.config, "Generation config document")->check(CLI::ExistingFile);
	generate->add_option("--out", o.out, "Output comparison set")->required();

	auto* elicit = app.add_subcommand("elicit", "Answer comparisons interactively in the terminal");
	elicit->add_option("--set", o.set, "Comparison set")->required()->check(CLI::ExistingFile);
	elicit->add_option("--max-questions", o.max_questions, "Questions to ask")->required();
	elicit->add_option("--seed", o.seed, "Selection seed");
	elicit->add_option("--out", o.out, "Answered set (default: overwrite --set)");
	elicit->add_option("--session", o.session, "Session file to resume from and keep updated");

	auto* learn = app.add_subcommand("learn", "Learn an objective function from an answered set");
	learn->add_option("--set", o.set, "Answered comparison set")->required()->check(CLI::ExistingFile);
	learn->add_option("--val-error", o.val_error, "Penalty per incompatible comparison")->required();
	learn->add_option("--seed", o.seed, "Base seed");
	learn->add_option("--out", o.out, "Output function document")->required();
	learn->add_option("--report", o.report, "Output report (default: <out>.report.json)");
	learn->add_option("--config", o.config, "Learn config document")->check(CLI::ExistingFile);
	learn->add_option("--debug-examples", o.debug_examples, "Write the final labeled examples as CSV");
	learn->add_flag("--trace", o.trace, "Keep per-generation GA traces in the report");
	learn->add_flag("--wall-time", o.wall_time, "Include wall-clock time in the report");

	auto* eval = app.add_subcommand("eval", "Global error of a function on an answered set");
	eval->add_option("--function", o.function, "Function document")->required()->check(CLI::ExistingFile);
	eval->add_option("--set", o.set, "Answered comparison set")->required()->check(CLI::ExistingFile);
	eval->add_option("--val-error", o.val_error, "Penalty per incompatible comparison");
	eval->add_option("--tie-epsilon", o.tie_epsilon, "Tie tolerance");

	auto* simulate = app.add_subcommand("simulate", "Closed loop with a simulated user");
	simulate->add_option("--instances", o.instances, "Instance list document")->required()->check(CLI::ExistingFile);
	simulate->add_option("--oracle", o.oracle, "Oracle document")->required()->check(CLI::ExistingFile);
	simulate->add_option("--config", o.config, "Simulation document")->check(CLI::ExistingFile);
	simulate->add_option("--out", o.out, "Closed-loop report");
	simulate->add_flag("--wall-time", o.wall_time, "Include wall-clock time in the report");

	auto* serve = app.add_subcommand("serve", "Run the HTTP service");
	serve->add_option("--host", o.host, "Bind address");
	serve->add_option("--port", o.port, "Port; 0 picks a free one");
	serve->add_option("--state-dir", o.state_dir, "Directory for persisted sessions");

	auto* render = app.add_subcommand("render", "Print a function as text rules");
	render->add_option("--function", o.function, "Function document")->required()->check(CLI::ExistingFile);

	auto* synth = app.add_subcommand("synth", "Write synthetic graded instances");
	synth->add_option("--count", o.count, "Number of instances");
	synth->add_option("--solutions", o.solutions, "Solutions per instance");
	synth->add_option("--seed", o.seed, "Seed");
	synth->add_option("--measures", o.measures, "Comma-separated measure ids (default: building measures)");
	synth->add_option("--base-low", o.graded.base_low, "Lowest base value, fraction of range");
	synth->add_option("--base-high", o.graded.base_high, "Highest base value, fraction of range");
	synth->add_option("--level-spread", o.graded.level_spread, "Quality shift std-dev, fraction of range");
	synth->add_option("--tradeoff-spread", o.graded.tradeoff_spread, "Trade-off std-dev, fraction of range");
	synth->add_option("--noise", o.graded.noise, "Per-measure noise std-dev, fraction of range");
	synth->add_option("--out", o.out, "Output instance list")->required();

	auto* fixture_cmd = app.add_subcommand("fixture", "Write the building fixture function and sets");
	fixture_cmd->add_option("--out-dir", o.out_dir, "Output directory")->required();

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? 0 : kUsage;
	}

	try {
		if (*generate) return run_generate(o);
		if (*elicit) return run_elicit(o);
		if (*learn) return run_learn(o);
		if (*eval) return run_eval(o);
		if (*simulate) return run_simulate(o);
		if (*serve) return run_serve(o);
		if (*render) return run_render(o);
		if (*synth) return run_synth(o);
		if (*fixture_cmd) return run_fixture(o);
	} catch (const DocumentError& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kValidation;
	} catch (const InvalidInput& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kValidation;
	} catch (const ProtocolError& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kValidation;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kRuntime;
	}
	return kUsage;
}
