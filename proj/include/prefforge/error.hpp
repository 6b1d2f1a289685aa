/// @file  error.hpp
/// @brief Exception types shared by every prefforge module.

#pragma once

#include <stdexcept>
#include <string>

namespace prefforge {

/// Root of the prefforge exception hierarchy.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// A caller handed an operation something that breaks its precondition.
class InvalidInput : public Error {
public:
	using Error::Error;
};

/// The elicitation protocol was violated (out-of-order or repeated answer).
class ProtocolError : public Error {
public:
	using Error::Error;
};

/// Base for document errors; carries a JSON path such as `$.comparisons[2].sol1`.
class DocumentError : public Error {
public:
	DocumentError(const std::string& location, const std::string& message)
		: Error(location + ": " + message), location_(location) {}

	const std::string& location() const noexcept { return location_; }

private:
	std::string location_;
};

/// Malformed JSON text, or a field of the wrong type / missing.
class ParseError : public DocumentError {
public:
	using DocumentError::DocumentError;
};

/// Missing or unsupported `format_version`.
class VersionMismatch : public DocumentError {
public:
	using DocumentError::DocumentError;
};

/// Well-formed document whose values break a domain invariant.
class InvariantViolation : public DocumentError {
public:
	using DocumentError::DocumentError;
};

}  // namespace prefforge
