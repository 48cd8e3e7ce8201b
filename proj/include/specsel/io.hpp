#pragma once

#include <json.hpp>
#include <string>

namespace specsel {

// Writes to a sibling temporary file, then renames it over `path`, so readers
// never see a half-written file. Throws Error on failure.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

// Throws ConfigError naming the file when it is missing or not valid JSON.
nlohmann::json read_json_file(const std::string& path);

}  // namespace specsel
