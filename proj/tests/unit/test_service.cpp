/// @file  test_service.cpp

#include <doctest.h>

#include <filesystem>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include <prefforge/comparison_generation.hpp>
#include <prefforge/learner.hpp>
#include <prefforge/building_fixture.hpp>
#include <prefforge/persistence.hpp>
#include <prefforge/service.hpp>

using namespace prefforge;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json unanswered_fixture() {
	auto set = fixture::make_fixture_set(fixture::building_function(), fixture::learning_spec());
	set.preferences.clear();
	return io::set_body(set);
}

std::string create_body(std::size_t max_questions) {
	return json{{"set", unanswered_fixture()}, {"max_questions", max_questions}, {"seed", 3}}.dump();
}

std::string verdict_body(const char* v) { return json{{"verdict", v}}.dump(); }

/// Answers up to @p n questions with a fixed cycle of verdicts.
void answer(service::Service& svc, const std::string& id, int n) {
	const char* cycle[] = {"PREFER_SOL1", "PREFER_SOL2", "TIE"};
	for (int i = 0; i < n; ++i) {
		const auto next = svc.next(id);
		if (next.status == 204) return;
		REQUIRE(next.status == 200);
		REQUIRE(svc.submit(id, verdict_body(cycle[i % 3])).status == 200);
	}
}

struct Running {
	service::Service svc;
	service::HttpServer http{svc};
	int port = -1;
	std::thread thread;

	Running() {
		port = http.bind_to_any_port("127.0.0.1");
		thread = std::thread([this] { http.listen_after_bind(); });
		http.wait_until_ready();
	}
	~Running() {
		http.stop();
		thread.join();
	}
};

}  // namespace

TEST_CASE("session lifecycle over the transport-free API") {
	service::Service svc;
	const auto created = svc.create_session(create_body(6));
	REQUIRE(created.status == 201);
	const std::string id = json::parse(created.body).at("session_id");
	CHECK(id == "s1");

	std::set<std::string> seen;
	for (int i = 0; i < 6; ++i) {
		const auto r = svc.next(id);
		REQUIRE(r.status == 200);
		const auto view = json::parse(r.body);
		const std::string cid = view.at("comparison_id");
		CHECK(seen.insert(cid).second);
		CHECK(view.contains("stage"));
		CHECK(view.at("sol1").at("measures").size() == 6);
		CHECK(view.at("sol2").at("display").is_string());
		// Asking again returns the same pending comparison.
		CHECK(json::parse(svc.next(id).body).at("comparison_id") == cid);
		const auto sub = svc.submit(id, verdict_body("PREFER_SOL1"));
		REQUIRE(sub.status == 200);
		CHECK(json::parse(sub.body).at("progress").at("asked") == i + 1);
	}
	CHECK(svc.next(id).status == 204);
	CHECK(svc.next(id).body.empty());

	const auto status = json::parse(svc.status(id).body);
	CHECK(status.at("asked") == 6);
	CHECK(status.at("finished") == true);
	CHECK(status.at("stage") == "finished");

	const auto learned = svc.learn(id, "{}");
	REQUIRE(learned.status == 200);
	const auto body = json::parse(learned.body);
	const auto fn = io::function_from_body(body.at("function"), "$");
	CHECK(body.at("rendered") == render_rules(fn));
	CHECK(body.at("report").at("comparisons") == 6);
}

TEST_CASE("error statuses") {
	service::Service svc;
	CHECK(svc.next("nope").status == 404);
	CHECK(svc.status("nope").status == 404);
	CHECK(svc.create_session("{broken").status == 400);
	CHECK(svc.create_session("{}").status == 400);
	CHECK(svc.create_session("[1]").status == 400);

	const std::string id = json::parse(svc.create_session(create_body(5)).body).at("session_id");
	CHECK(svc.submit(id, verdict_body("TIE")).status == 409);
	CHECK(svc.learn(id, "{}").status == 400);

	const std::string first = json::parse(svc.next(id).body).at("comparison_id");
	const auto wrong = json{{"verdict", "TIE"}, {"comparison_id", first == "L01" ? "L02" : "L01"}}.dump();
	CHECK(svc.submit(id, wrong).status == 409);
	CHECK(svc.submit(id, verdict_body("MAYBE")).status == 400);
	CHECK(svc.submit(id, "{}").status == 400);
	const auto ok = json{{"verdict", "TIE"}, {"comparison_id", first}}.dump();
	CHECK(svc.submit(id, ok).status == 200);
	// Stale: the comparison was already answered.
	svc.next(id);
	CHECK(svc.submit(id, ok).status == 409);
	const auto err = json::parse(svc.learn(id, R"({"val_error": -3})").body);
	CHECK(err.contains("error"));
}

TEST_CASE("learn uses only answered comparisons and matches a direct call") {
	service::Service svc;
	const std::string id = json::parse(svc.create_session(create_body(50)).body).at("session_id");
	answer(svc, id, 12);
	const auto session = io::session_from_document(json::parse(svc.export_session(id).body));
	CHECK(session.set().preferences.size() == 12);
	LearnConfig cfg;
	cfg.seed = 4;
	const auto direct = learn_objective(answered_subset(session.set()), cfg);
	const auto body = json::parse(svc.learn(id, json{{"seed", 4}}.dump()).body);
	CHECK(io::function_from_body(body.at("function"), "$") == direct.function);
	CHECK(body.at("report").at("final_error") == direct.report.final_error);
}

TEST_CASE("sessions from instances") {
	service::Service svc;
	const auto schema = fixture::building_schema();
	const io::InstanceList list{schema, synthesize_graded_instances(schema, 5, 4, GradedModel{}, 1)};
	auto doc = io::to_document(list);
	doc.erase("format_version");
	const json req{{"instances", doc}, {"generation", {{"pairs_per_instance", 2}}}, {"max_questions", 3}};
	const auto created = svc.create_session(req.dump());
	REQUIRE(created.status == 201);
	const std::string id = json::parse(created.body).at("session_id");
	CHECK(json::parse(svc.status(id).body).at("comparisons") == 10);
}

TEST_CASE("state directory persists and reloads sessions") {
	const auto dir = fs::temp_directory_path() / "prefforge_service_state";
	fs::remove_all(dir);
	std::string exported;
	{
		service::ServiceConfig cfg;
		cfg.state_dir = dir;
		service::Service svc(cfg);
		const std::string id = json::parse(svc.create_session(create_body(8)).body).at("session_id");
		answer(svc, id, 4);
		svc.next(id);
		exported = svc.export_session(id).body;
	}
	service::ServiceConfig cfg;
	cfg.state_dir = dir;
	service::Service reloaded(cfg);
	CHECK(reloaded.session_count() == 1);
	CHECK(reloaded.export_session("s1").body == exported);
	const std::string next = json::parse(reloaded.create_session(create_body(2)).body).at("session_id");
	CHECK(next == "s2");
	fs::remove_all(dir);
}

TEST_CASE("distinct sessions do not interfere under concurrency") {
	service::Service svc;
	std::vector<std::string> ids;
	for (int i = 0; i < 4; ++i) {
		ids.push_back(json::parse(svc.create_session(create_body(20)).body).at("session_id"));
	}
	std::vector<std::thread> workers;
	for (const auto& id : ids) {
		workers.emplace_back([&svc, id] { answer(svc, id, 20); });
	}
	workers.emplace_back([&svc, &ids] { svc.learn(ids[0], "{}"); });
	for (auto& t : workers) t.join();

	service::Service serial;
	const std::string ref = json::parse(serial.create_session(create_body(20)).body).at("session_id");
	answer(serial, ref, 20);
	const auto expected = json::parse(serial.export_session(ref).body);
	for (const auto& id : ids) {
		CHECK(json::parse(svc.export_session(id).body) == expected);
	}
}

TEST_CASE("HTTP endpoints") {
	Running server;
	REQUIRE(server.port > 0);
	httplib::Client cli("127.0.0.1", server.port);

	auto created = cli.Post("/sessions", create_body(3), "application/json");
	REQUIRE(created);
	CHECK(created->status == 201);
	CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
	CHECK(created->get_header_value("Content-Type") == "application/json");
	const std::string id = json::parse(created->body).at("session_id");

	auto preflight = cli.Options("/sessions");
	REQUIRE(preflight);
	CHECK(preflight->status == 204);

	for (int i = 0; i < 3; ++i) {
		auto next = cli.Get("/sessions/" + id + "/next");
		REQUIRE(next);
		CHECK(next->status == 200);
		auto pref = cli.Post("/sessions/" + id + "/preference", verdict_body("PREFER_SOL2"), "application/json");
		REQUIRE(pref);
		CHECK(pref->status == 200);
	}
	auto done = cli.Get("/sessions/" + id + "/next");
	REQUIRE(done);
	CHECK(done->status == 204);

	auto stale = cli.Post("/sessions/" + id + "/preference", verdict_body("TIE"), "application/json");
	REQUIRE(stale);
	CHECK(stale->status == 409);

	auto learn = cli.Post("/sessions/" + id + "/learn", "{}", "application/json");
	REQUIRE(learn);
	CHECK(learn->status == 200);
	CHECK(json::parse(learn->body).contains("rendered"));

	auto status = cli.Get("/sessions/" + id);
	REQUIRE(status);
	CHECK(json::parse(status->body).at("asked") == 3);

	auto exported = cli.Get("/sessions/" + id + "/export");
	REQUIRE(exported);
	CHECK(io::session_from_document(json::parse(exported->body)).asked().size() == 3);

	auto missing = cli.Get("/sessions/zz/next");
	REQUIRE(missing);
	CHECK(missing->status == 404);

	auto bad = cli.Post("/sessions", "{oops", "application/json");
	REQUIRE(bad);
	CHECK(bad->status == 400);
}
