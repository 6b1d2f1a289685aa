/// @file  service.hpp
/// @brief HTTP facade over elicitation sessions and learning.
///
/// Endpoints (JSON in and out, CORS open):
///   POST /sessions                  create from a set or from instances -> 201 {session_id}
///   GET  /sessions/{id}/next        next comparison view, or 204 when finished
///   POST /sessions/{id}/preference  {verdict[, comparison_id]} -> 200 {progress}
///   POST /sessions/{id}/learn       learn config -> 200 {function, report, rendered}
///   GET  /sessions/{id}             status
///   GET  /sessions/{id}/export      full session document
/// Errors: 400 malformed body, 404 unknown session, 409 protocol violation.
/// Error bodies are {"error": message[, "location": json path]}.

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include <prefforge/elicitation.hpp>

namespace prefforge::service {

struct Response {
	int status = 200;
	std::string body;  ///< JSON text; empty for 204
};

struct ServiceConfig {
	/// Sessions are written here after every change and reloaded on start.
	std::optional<std::filesystem::path> state_dir;
};

/// Session registry and request handlers, independent of any transport.
/// Handlers are safe to call concurrently; each session has its own lock and
/// learning runs on a snapshot without holding it.
class Service {
public:
	explicit Service(ServiceConfig config = {});

	Response create_session(std::string_view body);
	Response next(const std::string& id);
	Response submit(const std::string& id, std::string_view body);
	Response learn(const std::string& id, std::string_view body);
	Response status(const std::string& id);
	Response export_session(const std::string& id);

	std::size_t session_count() const;

private:
	struct Entry {
		std::mutex mutex;
		Session session;
	};

	std::shared_ptr<Entry> find(const std::string& id) const;
	void persist(const std::string& id, const Session& session) const;

	ServiceConfig config_;
	mutable std::shared_mutex registry_mutex_;
	std::map<std::string, std::shared_ptr<Entry>> sessions_;
	std::size_t next_id_ = 1;
};

/// cpp-httplib server routing requests to a Service.
class HttpServer {
public:
	explicit HttpServer(Service& service);
	~HttpServer();
	HttpServer(const HttpServer&) = delete;
	HttpServer& operator=(const HttpServer&) = delete;

	/// Binds and serves until stop(); returns false if binding fails.
	bool listen(const std::string& host, int port);
	/// Binds to `port` and returns it, or -1.
	int bind(const std::string& host, int port);
	/// Binds to a free port and returns it, or -1.
	int bind_to_any_port(const std::string& host);
	/// Serves on a socket bound by bind or bind_to_any_port; blocks until stop().
	bool listen_after_bind();
	void stop();
	bool is_running() const;
	void wait_until_ready() const;

private:
	struct Impl;
	std::unique_ptr<Impl> impl_;
};

}  // namespace prefforge::service
