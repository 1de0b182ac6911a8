#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace arena {

using json = nlohmann::json;

// Canonical text form: sorted keys, two-space indent, floating point values
// with exactly four decimals. Structurally equal documents give equal bytes.
std::string canonical_dump(const json& doc);

// Parses text, mapping syntax errors to ErrorCode::kMalformedJson.
json parse_json(const std::string& text);

// Finds the first balanced {...} object in free-form model output (code
// fences, prose preambles) and parses it.
json extract_json_object(const std::string& text);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace arena
