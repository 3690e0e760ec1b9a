#include "metrics/api_extract.hpp"

#include <cctype>
#include <unordered_set>

namespace apg {
namespace metrics {

namespace {

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool plausible_api(const std::string& dotted) {
    // Needs a dot. Two single-letter segments are prose artifacts
    // ("e.g", "i.e"), not APIs.
    size_t dots = 0, run = 0, longest = 0;
    for (char c : dotted) {
        if (c == '.') {
            ++dots;
            longest = std::max(longest, run);
            run = 0;
        } else {
            ++run;
        }
    }
    longest = std::max(longest, run);
    if (dots == 0) return false;
    return !(dots == 1 && longest <= 1);
}

}  // namespace

std::string normalize_api(const std::string& raw) {
    std::string s = raw;
    // surrounding quotes / backticks / whitespace
    size_t b = 0, e = s.size();
    auto is_wrap = [](char c) {
        return c == '`' || c == '"' || c == '\'' || std::isspace(static_cast<unsigned char>(c));
    };
    while (b < e && is_wrap(s[b])) ++b;
    while (e > b && is_wrap(s[e - 1])) --e;
    s = s.substr(b, e - b);
    // trailing argument list
    if (size_t paren = s.find('('); paren != std::string::npos) s = s.substr(0, paren);
    // trailing punctuation
    while (!s.empty() && (s.back() == '.' || s.back() == ',' || s.back() == ';' ||
                          s.back() == ':' || s.back() == '!' || s.back() == '?')) {
        s.pop_back();
    }
    return s;
}

ApiPrediction extract_apis(const std::string& model_output, size_t cap) {
    ApiPrediction prediction;
    std::unordered_set<std::string> seen;

    size_t i = 0;
    const size_t n = model_output.size();
    while (i < n && prediction.apis.size() < cap) {
        if (!ident_start(model_output[i])) {
            ++i;
            continue;
        }
        // Consume a dotted identifier chain: ident (. ident)*
        size_t start = i;
        while (i < n && ident_char(model_output[i])) ++i;
        size_t segments = 1;
        while (i + 1 < n && model_output[i] == '.' && ident_start(model_output[i + 1])) {
            ++i;
            while (i < n && ident_char(model_output[i])) ++i;
            ++segments;
        }
        if (segments >= 2) {
            std::string api = normalize_api(model_output.substr(start, i - start));
            if (plausible_api(api) && seen.insert(api).second) {
                prediction.apis.push_back(std::move(api));
            }
        }
    }
    return prediction;
}

}  // namespace metrics
}  // namespace apg
