#pragma once

#include "json.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace lyricsim {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

nlohmann::json read_json_file(const std::filesystem::path& path);

/// Calls fn for every non-blank line parsed as JSON. Parse failures throw
/// MalformedRecord naming the file and line.
void for_each_json_line(const std::filesystem::path& path, const std::function<void(const nlohmann::json&)>& fn);

} // namespace lyricsim
