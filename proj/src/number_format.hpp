/// @file  number_format.hpp
/// @brief Shortest round-trip decimal text for doubles (internal).

#pragma once

#include <charconv>
#include <string>

namespace prefforge::detail {

inline std::string format_number(double v) {
	char buf[64];
	auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
	if (ec != std::errc{}) {
		return std::to_string(v);
	}
	return std::string(buf, end);
}

}  // namespace prefforge::detail
