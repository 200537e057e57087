#pragma once
// JSON-lines and small file helpers.

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypogen/errors.hpp"
#include "hypogen/text.hpp"

namespace hypogen {

using json = nlohmann::ordered_json;

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_error(ErrorKind::Io, "cannot open for reading: " + path.string());
    return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) throw_error(ErrorKind::Io, "cannot open for writing: " + path.string());
    return out;
}

inline std::vector<json> read_jsonl(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<json> records;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (normalize_ws(line).empty()) continue;
        try {
            records.push_back(json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw_error(ErrorKind::Parse,
                        path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return records;
}

inline void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records) {
    auto out = open_output(path);
    for (const auto& r : records) out << r.dump() << "\n";
    if (!out) throw_error(ErrorKind::Io, "write failed: " + path.string());
}

inline json read_json_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    try {
        return json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw_error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
}

inline void write_json_file(const std::filesystem::path& path, const json& value) {
    auto out = open_output(path);
    out << value.dump(2) << "\n";
    if (!out) throw_error(ErrorKind::Io, "write failed: " + path.string());
}

inline std::string slurp(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hypogen
