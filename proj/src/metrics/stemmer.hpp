#pragma once

#include <string>
#include <string_view>

namespace apg {
namespace metrics {

/// Porter stemmer (1980 algorithm, with the bli/logi revisions). Input is
/// lowercased first; words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace metrics
}  // namespace apg
