#include "lyricsim/json_io.hpp"

#include "lyricsim/error.hpp"

#include <fstream>
#include <sstream>

namespace lyricsim {

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    // write-then-rename so readers never see a half-written artifact
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::Io, "cannot write " + path.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw Error(ErrorCode::Io, "short write to " + path.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

nlohmann::json read_json_file(const std::filesystem::path& path)
{
    const auto text = read_text_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedRecord, path.string() + ": " + e.what());
    }
}

void for_each_json_line(const std::filesystem::path& path, const std::function<void(const nlohmann::json&)>& fn)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedRecord, path.string() + " line " + std::to_string(line_no) + ": " + e.what());
        }
        try {
            fn(j);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedRecord, path.string() + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

} // namespace lyricsim
