#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/error.hpp"
#include "metrics/api_extract.hpp"
#include "metrics/retrieval.hpp"

using namespace apg;
using namespace apg::metrics;

namespace {

ApiPrediction pred(std::vector<std::string> apis) {
    return ApiPrediction{std::move(apis)};
}

TruthApis truth(std::vector<std::string> apis) {
    return TruthApis::from_raw(apis);
}

}  // namespace

TEST_CASE("extract_apis pulls dotted identifiers from numbered lines") {
    const auto p = extract_apis("1. java.lang.String.split — splits a string by a delimiter");
    REQUIRE(p.apis.size() == 1);
    CHECK(p.apis[0] == "java.lang.String.split");
}

TEST_CASE("extract_apis strips argument lists in prose") {
    const auto p = extract_apis("use java.text.BreakIterator.getSentenceInstance() here");
    REQUIRE(p.apis.size() == 1);
    CHECK(p.apis[0] == "java.text.BreakIterator.getSentenceInstance");
}

TEST_CASE("extract_apis: no dotted identifiers gives an empty prediction") {
    CHECK(extract_apis("no apis mentioned anywhere").apis.empty());
    CHECK(extract_apis("").apis.empty());
}

TEST_CASE("extract_apis dedups preserving first occurrence and caps length") {
    const auto p = extract_apis(
        "1. a.b.c\n2. d.e.f\n3. a.b.c again\n4. `g.h.i(x, y)`\n5. d.e.f");
    CHECK(p.apis == std::vector<std::string>{"a.b.c", "d.e.f", "g.h.i"});

    std::string many;
    for (int i = 0; i < 20; ++i) many += "pkg.mod" + std::to_string(i) + ".fn\n";
    CHECK(extract_apis(many).apis.size() == kDefaultApiCap);
}

TEST_CASE("extract_apis ignores prose artifacts like e.g and i.e") {
    const auto p = extract_apis("e.g. use os.path.join, i.e. the portable way");
    CHECK(p.apis == std::vector<std::string>{"os.path.join"});
}

TEST_CASE("normalize_api is idempotent") {
    for (const std::string raw :
         {"`java.lang.String.split(\",\")`", "os.path.join", "a.b.c.", "  x.y(z) ,"}) {
        const std::string once = normalize_api(raw);
        CHECK(normalize_api(once) == once);
    }
    CHECK(normalize_api("`java.lang.String.split(\",\")`") == "java.lang.String.split");
}

TEST_CASE("success rate: every rank-1 hit at k=1 scores 1") {
    const std::vector<ApiPrediction> preds = {pred({"a.b"}), pred({"c.d", "x.y"})};
    const std::vector<TruthApis> truths = {truth({"a.b"}), truth({"c.d"})};
    CHECK(success_rate_at_k(preds, truths, 1) == 1.0);
}

TEST_CASE("success rate: relevant only at rank 3 misses k=1") {
    const std::vector<ApiPrediction> preds = {pred({"x.x", "y.y", "a.b"})};
    const std::vector<TruthApis> truths = {truth({"a.b"})};
    CHECK(success_rate_at_k(preds, truths, 1) == 0.0);
    CHECK(success_rate_at_k(preds, truths, 3) == 1.0);
}

TEST_CASE("success rate: first-relevant ranks (1, 2, none) at k=3 is 2/3") {
    const std::vector<ApiPrediction> preds = {
        pred({"a.b", "z.z"}),
        pred({"z.z", "c.d"}),
        pred({"z.z", "w.w"}),
    };
    const std::vector<TruthApis> truths = {truth({"a.b"}), truth({"c.d"}), truth({"q.q"})};
    CHECK(success_rate_at_k(preds, truths, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mrr: all rank-1 gives 1; nothing relevant gives 0") {
    CHECK(mrr({pred({"a.b"})}, {truth({"a.b"})}) == 1.0);
    CHECK(mrr({pred({"a.b"})}, {truth({"c.d"})}) == 0.0);
}

TEST_CASE("mrr: ranks (1, 2, 4) average to 7/12") {
    const std::vector<ApiPrediction> preds = {
        pred({"a.b"}),
        pred({"z.z", "c.d"}),
        pred({"z.z", "y.y", "x.x", "e.f"}),
    };
    const std::vector<TruthApis> truths = {truth({"a.b"}), truth({"c.d"}), truth({"e.f"})};
    CHECK(mrr(preds, truths) == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("length mismatch and empty inputs are precondition errors") {
    CHECK_THROWS_AS(success_rate_at_k({pred({"a.b"})}, {}, 1), Error);
    CHECK_THROWS_AS(mrr({}, {}), Error);
    CHECK_THROWS_AS(success_rate_at_k({pred({"a.b"})}, {truth({"a.b"})}, 0), Error);
}

TEST_CASE("case-insensitive flag relaxes matching") {
    const std::vector<ApiPrediction> preds = {pred({"Java.Lang.String.Split"})};
    const std::vector<TruthApis> sensitive = {truth({"java.lang.string.split"})};
    CHECK(mrr(preds, sensitive, false) == 0.0);
    const std::vector<TruthApis> relaxed = {
        TruthApis::from_raw({"java.lang.string.split"}, true)};
    CHECK(mrr(preds, relaxed, true) == 1.0);
}

TEST_CASE("SR@k is monotone in k and brackets MRR on random sets") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t n_queries = 1 + rng() % 6;
        std::vector<ApiPrediction> preds;
        std::vector<TruthApis> truths;
        size_t max_len = 1;
        for (size_t q = 0; q < n_queries; ++q) {
            const size_t len = 1 + rng() % 6;
            max_len = std::max(max_len, len);
            std::vector<std::string> apis;
            for (size_t i = 0; i < len; ++i) {
                apis.push_back("pkg.fn" + std::to_string(rng() % 8));
            }
            ApiPrediction p;  // dedup like extract_apis would
            for (const auto& a : apis) {
                if (std::find(p.apis.begin(), p.apis.end(), a) == p.apis.end()) {
                    p.apis.push_back(a);
                }
            }
            preds.push_back(p);
            truths.push_back(truth({"pkg.fn" + std::to_string(rng() % 8)}));
        }
        double prev = 0.0;
        for (int k = 1; k <= static_cast<int>(max_len); ++k) {
            const double sr = success_rate_at_k(preds, truths, k);
            CHECK(sr >= prev);
            prev = sr;
        }
        const double sr1 = success_rate_at_k(preds, truths, 1);
        const double srk = success_rate_at_k(preds, truths, static_cast<int>(max_len));
        const double m = mrr(preds, truths);
        CHECK(sr1 <= m + 1e-12);
        CHECK(m <= srk + 1e-12);
    }
}
