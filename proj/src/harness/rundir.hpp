#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace apg {

/// Append-only JSON Lines writer; all writes serialize through one lock.
class JsonlWriter {
public:
    explicit JsonlWriter(const std::filesystem::path& path);

    void write(const nlohmann::json& record);
    void flush();

private:
    std::mutex mutex_;
    std::ofstream out_;
};

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

/// Creates <root>/<name> (and parents). Returns the run directory path.
std::filesystem::path create_run_dir(const std::string& root, const std::string& name);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace apg
