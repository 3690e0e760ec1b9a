#include "instructgen/parse.hpp"

#include <cctype>
#include <unordered_set>

#include "core/text.hpp"

namespace apg {

std::string whitespace_normalize(const std::string& text) {
    std::string out;
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out += ' ';
            pending_space = false;
            out += c;
        }
    }
    return out;
}

namespace {

std::string strip_list_prefix(const std::string& line) {
    size_t i = 0;
    const size_t n = line.size();
    // "- " / "* " bullets
    if (i < n && (line[i] == '-' || line[i] == '*')) {
        size_t j = i + 1;
        while (j < n && line[j] == ' ') ++j;
        if (j > i + 1) return line.substr(j);
    }
    // "12. " / "12) " enumerations
    size_t j = i;
    while (j < n && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i && j < n && (line[j] == '.' || line[j] == ')')) {
        size_t k = j + 1;
        while (k < n && line[k] == ' ') ++k;
        if (k > j + 1 || k == n) return line.substr(k);
    }
    return line;
}

}  // namespace

std::vector<std::string> parse_candidate_instructions(const std::string& response) {
    std::vector<std::string> raw;

    size_t cursor = 0;
    while (true) {
        const size_t open = response.find("<INS>", cursor);
        if (open == std::string::npos) break;
        const size_t close = response.find("</INS>", open + 5);
        if (close == std::string::npos) break;
        raw.push_back(trim(response.substr(open + 5, close - open - 5)));
        cursor = close + 6;
    }

    if (raw.empty()) {
        for (const std::string& line : split_lines(response)) {
            const std::string cleaned = trim(strip_list_prefix(trim(line)));
            if (!cleaned.empty()) raw.push_back(cleaned);
        }
    }

    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (std::string& text : raw) {
        if (text.empty()) continue;
        if (seen.insert(whitespace_normalize(text)).second) out.push_back(std::move(text));
    }
    return out;
}

}  // namespace apg
