/// @file  service.cpp

#include <prefforge/service.hpp>

#include <algorithm>
#include <charconv>

#include <httplib.h>

#include <prefforge/comparison_generation.hpp>
#include <prefforge/error.hpp>
#include <prefforge/learner.hpp>
#include <prefforge/persistence.hpp>

namespace prefforge::service {

namespace {

using io::Json;

Response json_response(int status, const Json& body) {
	return {status, body.dump()};
}

Response error_response(int status, const std::string& message,
                        const std::string& location = {}) {
	Json body{{"error", message}};
	if (!location.empty()) {
		body["location"] = location;
	}
	return json_response(status, body);
}

Response not_found(const std::string& id) {
	return error_response(404, "unknown session '" + id + "'");
}

/// Runs @p fn and maps library exceptions onto HTTP statuses.
template <class Fn>
Response guarded(Fn&& fn) {
	try {
		return fn();
	} catch (const ProtocolError& e) {
		return error_response(409, e.what());
	} catch (const DocumentError& e) {
		return error_response(400, e.what(), e.location());
	} catch (const InvalidInput& e) {
		return error_response(400, e.what());
	} catch (const Error& e) {
		return error_response(500, e.what());
	}
}

Json parse_body(std::string_view body) {
	if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) {
		return Json::object();
	}
	Json j = io::parse(body);
	if (!j.is_object()) {
		throw ParseError("$", "request body must be a JSON object");
	}
	return j;
}

/// Accepts a full document or a bare body for the given kind.
Json as_document(Json j) {
	if (j.is_object() && !j.contains("format_version")) {
		j["format_version"] = std::string(io::kFormatVersion);
	}
	return j;
}

template <class T>
T optional_field(const Json& j, const char* key, T fallback) {
	auto it = j.find(key);
	if (it == j.end() || it->is_null()) {
		return fallback;
	}
	try {
		return it->get<T>();
	} catch (const Json::exception&) {
		throw ParseError(std::string("$.") + key, "wrong type");
	}
}

Json progress(const Session& s) {
	return {{"asked", s.asked().size()},
	        {"answered", s.set().preferences.size()},
	        {"max_questions", s.max_questions()},
	        {"finished", s.finished()},
	        {"stage", s.stage_label()}};
}

Session session_from_request(const Json& req) {
	ComparisonSet set;
	if (req.contains("set")) {
		set = io::set_from_document(as_document(req.at("set")));
	} else if (req.contains("set_file")) {
		set = io::load_set(optional_field<std::string>(req, "set_file", {}));
	} else if (req.contains("instances") || req.contains("instances_file")) {
		const io::InstanceList list =
		    req.contains("instances")
		        ? io::instances_from_document(as_document(req.at("instances")))
		        : io::load_instances(optional_field<std::string>(req, "instances_file", {}));
		GenerationConfig gen;
		if (req.contains("generation")) {
			gen = io::generation_config_from_body(req.at("generation"), "$.generation");
		}
		set = generate_comparisons(list.schema, list.instances, gen).set;
	} else {
		throw ParseError("$", "expected one of set, set_file, instances, instances_file");
	}

	const auto max_questions =
	    optional_field<std::size_t>(req, "max_questions", set.comparisons.size());
	const auto seed = optional_field<std::uint64_t>(req, "seed", 1);
	const auto tolerance = optional_field<double>(req, "measure_tolerance", 1.0);
	const StrategyPipeline pipeline =
	    req.contains("pipeline") ? io::pipeline_from_json(req.at("pipeline"), "$.pipeline")
	                             : default_pipeline(set.schema, max_questions);
	return Session(std::move(set), pipeline, max_questions, seed, tolerance);
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)) {
	if (!config_.state_dir) {
		return;
	}
	std::filesystem::create_directories(*config_.state_dir);
	for (const auto& file : std::filesystem::directory_iterator(*config_.state_dir)) {
		if (file.path().extension() != ".json") {
			continue;
		}
		const std::string id = file.path().stem().string();
		auto entry = std::make_shared<Entry>();
		entry->session = io::load_session(file.path());
		sessions_[id] = entry;
		if (id.size() > 1 && id[0] == 's') {
			std::size_t n = 0;
			const auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), n);
			if (ec == std::errc() && ptr == id.data() + id.size()) {
				next_id_ = std::max(next_id_, n + 1);
			}
		}
	}
}

std::size_t Service::session_count() const {
	std::shared_lock lock(registry_mutex_);
	return sessions_.size();
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) const {
	std::shared_lock lock(registry_mutex_);
	auto it = sessions_.find(id);
	return it == sessions_.end() ? nullptr : it->second;
}

void Service::persist(const std::string& id, const Session& session) const {
	if (config_.state_dir) {
		io::save(*config_.state_dir / (id + ".json"), session);
	}
}

Response Service::create_session(std::string_view body) {
	return guarded([&] {
		auto entry = std::make_shared<Entry>();
		entry->session = session_from_request(parse_body(body));
		std::string id;
		{
			std::unique_lock lock(registry_mutex_);
			id = "s" + std::to_string(next_id_++);
			sessions_[id] = entry;
		}
		std::lock_guard guard(entry->mutex);
		persist(id, entry->session);
		return json_response(201, {{"session_id", id}});
	});
}

Response Service::next(const std::string& id) {
	auto entry = find(id);
	if (!entry) return not_found(id);
	return guarded([&] {
		std::lock_guard guard(entry->mutex);
		Session& s = entry->session;
		const auto c = s.next_comparison();
		persist(id, s);
		if (!c) {
			return Response{204, {}};
		}
		return json_response(200, io::comparison_view(*c, s.set().schema, s.stage_label()));
	});
}

Response Service::submit(const std::string& id, std::string_view body) {
	auto entry = find(id);
	if (!entry) return not_found(id);
	return guarded([&] {
		const Json req = parse_body(body);
		if (!req.contains("verdict")) {
			throw ParseError("$.verdict", "missing field");
		}
		const Verdict verdict = io::verdict_from_json(req.at("verdict"), "$.verdict");
		std::lock_guard guard(entry->mutex);
		Session& s = entry->session;
		std::string cid;
		if (req.contains("comparison_id")) {
			cid = optional_field<std::string>(req, "comparison_id", {});
		} else if (s.pending()) {
			cid = *s.pending();
		} else {
			throw ProtocolError("no comparison is awaiting an answer");
		}
		s.submit_preference({cid, verdict});
		persist(id, s);
		return json_response(200, {{"progress", progress(s)}});
	});
}

Response Service::learn(const std::string& id, std::string_view body) {
	auto entry = find(id);
	if (!entry) return not_found(id);
	return guarded([&] {
		const LearnConfig cfg = io::learn_config_from_body(parse_body(body), "$");
		ComparisonSet answered;
		{
			std::lock_guard guard(entry->mutex);
			answered = answered_subset(entry->session.set());
		}
		if (answered.comparisons.empty()) {
			throw InvalidInput("no answered comparisons to learn from");
		}
		const LearnResult result = learn_objective(answered, cfg);
		return json_response(200, {{"function", io::function_body(result.function)},
		                           {"report", io::report_body(result.report)},
		                           {"rendered", render_rules(result.function)}});
	});
}

Response Service::status(const std::string& id) {
	auto entry = find(id);
	if (!entry) return not_found(id);
	return guarded([&] {
		std::lock_guard guard(entry->mutex);
		const Session& s = entry->session;
		Json body = progress(s);
		body["session_id"] = id;
		body["comparisons"] = s.set().comparisons.size();
		body["pending"] = s.pending() ? Json(*s.pending()) : Json(nullptr);
		body["consistency_flags"] = consistency_flags(s);
		body["log"] = s.log();
		return json_response(200, body);
	});
}

Response Service::export_session(const std::string& id) {
	auto entry = find(id);
	if (!entry) return not_found(id);
	return guarded([&] {
		std::lock_guard guard(entry->mutex);
		return json_response(200, io::to_document(entry->session));
	});
}

// ---- HTTP --------------------------------------------------------------------

struct HttpServer::Impl {
	Service& service;
	httplib::Server server;

	explicit Impl(Service& s) : service(s) {
		server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
		                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
		                            {"Access-Control-Allow-Headers", "Content-Type"}});
		auto send = [](httplib::Response& res, const Response& r) {
			res.status = r.status;
			if (!r.body.empty()) {
				res.set_content(r.body, "application/json");
			}
		};
		server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
			res.status = 204;
		});
		server.Post("/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
			send(res, service.create_session(req.body));
		});
		server.Get(R"(/sessions/([^/]+)/next)", [this, send](const httplib::Request& req, httplib::Response& res) {
			send(res, service.next(req.matches[1]));
		});
		server.Post(R"(/sessions/([^/]+)/preference)",
		            [this, send](const httplib::Request& req, httplib::Response& res) {
			            send(res, service.submit(req.matches[1], req.body));
		            });
		server.Post(R"(/sessions/([^/]+)/learn)", [this, send](const httplib::Request& req, httplib::Response& res) {
			send(res, service.learn(req.matches[1], req.body));
		});
		server.Get(R"(/sessions/([^/]+)/export)", [this, send](const httplib::Request& req, httplib::Response& res) {
			send(res, service.export_session(req.matches[1]));
		});
		server.Get(R"(/sessions/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
			send(res, service.status(req.matches[1]));
		});
	}
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int HttpServer::bind(const std::string& host, int port) {
	return impl_->server.bind_to_port(host, port) ? port : -1;
}
int HttpServer::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() { impl_->server.stop(); }
bool HttpServer::is_running() const { return impl_->server.is_running(); }
void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace prefforge::service
