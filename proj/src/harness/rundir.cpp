#include "harness/rundir.hpp"

#include <sstream>

#include "core/error.hpp"

namespace apg {

JsonlWriter::JsonlWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw Error(ErrorCode::Io, "cannot open for writing: " + path.string());
}

void JsonlWriter::write(const nlohmann::json& record) {
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << record.dump() << "\n";
}

void JsonlWriter::flush() {
    std::lock_guard<std::mutex> lock(mutex_);
    out_.flush();
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open: " + path.string());
    std::vector<nlohmann::json> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Io,
                        path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::filesystem::path create_run_dir(const std::string& root, const std::string& name) {
    std::filesystem::path dir = std::filesystem::path(root) / name;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create run directory " + dir.string() + ": " +
                                           ec.message());
    return dir;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write: " + path.string());
    out << content;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace apg
