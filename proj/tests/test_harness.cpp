#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "core/error.hpp"
#include "harness/config.hpp"
#include "harness/experiment.hpp"
#include "harness/report.hpp"
#include "harness/rundir.hpp"
#include "harness/stats.hpp"

using namespace apg;
using nlohmann::json;

// --- statistics ---------------------------------------------------------------

TEST_CASE("summarize: constant series has zero std and zero cv") {
    const StatSummary s = summarize({2.0, 2.0, 2.0});
    CHECK(s.mean == 2.0);
    CHECK(s.std == 0.0);
    CHECK(s.cv == 0.0);
    CHECK(s.cv_defined);
}

TEST_CASE("summarize: population sigma on 1,2,3") {
    const StatSummary s = summarize({1.0, 2.0, 3.0});
    CHECK(s.mean == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.std == doctest::Approx(0.816496580927726).epsilon(1e-12));
    CHECK(s.cv == doctest::Approx(0.408248290463863).epsilon(1e-12));
    // Sample-sigma variant by flag.
    const StatSummary sample = summarize({1.0, 2.0, 3.0}, true);
    CHECK(sample.std == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("summarize flags undefined cv at zero mean") {
    const StatSummary s = summarize({-1.0, 1.0});
    CHECK(!s.cv_defined);
}

TEST_CASE("aggregate is permutation-invariant and checks metric sets") {
    const std::map<std::string, double> r1 = {{"BLEU", 0.5}, {"ROUGE-L", 0.6}};
    const std::map<std::string, double> r2 = {{"BLEU", 0.7}, {"ROUGE-L", 0.4}};
    const std::map<std::string, double> r3 = {{"BLEU", 0.6}, {"ROUGE-L", 0.5}};
    const auto a = aggregate({r1, r2, r3});
    const auto b = aggregate({r3, r1, r2});
    CHECK(a.at("BLEU").mean == b.at("BLEU").mean);
    CHECK(a.at("BLEU").std == b.at("BLEU").std);
    CHECK(a.at("ROUGE-L").cv == b.at("ROUGE-L").cv);

    const std::map<std::string, double> missing = {{"BLEU", 0.1}};
    try {
        aggregate({r1, missing});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("ROUGE-L") != std::string::npos);
    }
}

TEST_CASE("paired t-test: identical vectors give t=0, p=1") {
    const TTestResult r = paired_t_test({0.3, 0.5, 0.7}, {0.3, 0.5, 0.7});
    CHECK(r.t_statistic == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK(!r.significant_at_05);
    CHECK(!r.degenerate);
}

TEST_CASE("paired t-test: constant nonzero difference is degenerate with p=0") {
    const TTestResult r = paired_t_test({1.1, 2.1, 3.1}, {1.0, 2.0, 3.0});
    CHECK(r.degenerate);
    CHECK(r.p_value == 0.0);
    CHECK(r.significant_at_05);
}

TEST_CASE("paired t-test matches an independent computation on the 10-pair fixture") {
    // Frozen from an independent statistical package (scipy.stats.ttest_rel).
    const std::vector<double> a = {0.52, 0.61, 0.43, 0.70, 0.55, 0.68, 0.49, 0.77, 0.66, 0.58};
    const std::vector<double> b = {0.48, 0.55, 0.47, 0.62, 0.50, 0.69, 0.41, 0.70, 0.60, 0.51};
    const TTestResult r = paired_t_test(a, b);
    CHECK(r.t_statistic == doctest::Approx(3.6315789473684243).epsilon(1e-9));
    CHECK(r.p_value == doctest::Approx(0.0054721500764633056).epsilon(1e-6));
    CHECK(r.n_pairs == 10);
    CHECK(r.significant_at_05);
}

TEST_CASE("student t cdf matches frozen reference values") {
    // two-tailed p = 2 * (1 - cdf(|t|)); frozen from an independent package.
    auto two_tailed = [](double t, int df) { return 2.0 * (1.0 - student_t_cdf(t, df)); };
    CHECK(two_tailed(2.5, 9) == doctest::Approx(0.033861827682985707).epsilon(1e-9));
    CHECK(two_tailed(0.37, 9) == doctest::Approx(0.71993946456983515).epsilon(1e-9));
    CHECK(two_tailed(1.0, 4) == doctest::Approx(0.37390096630005898).epsilon(1e-9));
    CHECK(two_tailed(3.25, 29) == doctest::Approx(0.0029195584190399504).epsilon(1e-9));
    CHECK(two_tailed(0.0, 9) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("paired t-test symmetry on random pairs") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const size_t n = 2 + rng() % 10;
        std::vector<double> a(n), b(n);
        for (size_t i = 0; i < n; ++i) {
            a[i] = static_cast<double>(rng() % 1000) / 1000.0;
            b[i] = static_cast<double>(rng() % 1000) / 1000.0;
        }
        const TTestResult ab = paired_t_test(a, b);
        const TTestResult ba = paired_t_test(b, a);
        CHECK(ab.t_statistic == doctest::Approx(-ba.t_statistic).epsilon(1e-12));
        CHECK(ab.p_value == doctest::Approx(ba.p_value).epsilon(1e-12));
    }
}

TEST_CASE("paired t-test preconditions") {
    CHECK_THROWS_AS(paired_t_test({1.0}, {1.0}), Error);
    CHECK_THROWS_AS(paired_t_test({1.0, 2.0}, {1.0}), Error);
}

// --- config ---------------------------------------------------------------------

TEST_CASE("kv config: file parsing, overrides, snapshot") {
    const std::string path = "test_harness_config.txt";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "task = translation\n";
        out << "source_lang = python\n";
        out << "target_lang = java\n";
        out << "repeats = 2\n";
    }
    KvConfig kv;
    kv.load_file(path);
    kv.set("repeats", "3");  // override wins
    const ExperimentConfig cfg = build_experiment_config(kv);
    CHECK(cfg.task.type == TaskType::CodeTranslation);
    CHECK(cfg.repeats == 3);
    CHECK(cfg.sampling.max_tokens == 256);  // per-task default
    CHECK(kv.snapshot().find("repeats = 3") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("config validation: unknown keys, bad values, unknown method") {
    KvConfig kv;
    kv.set("task", "api-rec");
    kv.set("definitely_not_a_key", "x");
    CHECK_THROWS_AS(build_experiment_config(kv), Error);

    KvConfig kv2;
    kv2.set("task", "api-rec");
    kv2.set("method", "magic");
    CHECK_THROWS_AS(build_experiment_config(kv2), Error);

    KvConfig kv3;
    kv3.set("task", "api-rec");
    kv3.set("repeats", "zero");
    CHECK_THROWS_AS(build_experiment_config(kv3), Error);

    KvConfig kv4;  // summarization without lang
    kv4.set("task", "summarization");
    CHECK_THROWS_AS(build_experiment_config(kv4), Error);
}

TEST_CASE("sampling defaults follow the task") {
    KvConfig kv;
    kv.set("task", "api-rec");
    const ExperimentConfig cfg = build_experiment_config(kv);
    CHECK(cfg.sampling.temperature == doctest::Approx(0.2));
    CHECK(cfg.sampling.top_p == doctest::Approx(0.95));
    CHECK(cfg.sampling.max_tokens == 128);

    KvConfig kv2;
    kv2.set("task", "summarization");
    kv2.set("lang", "python");
    CHECK(build_experiment_config(kv2).sampling.max_tokens == 512);
}

// --- reports -------------------------------------------------------------------

namespace {

MethodSummary method_summary(const std::string& name,
                             const std::map<std::string, double>& means) {
    MethodSummary m;
    m.method = name;
    for (const auto& [metric, mean] : means) {
        StatSummary s;
        s.mean = mean;
        s.n_runs = 1;
        m.metrics[metric] = s;
    }
    return m;
}

}  // namespace

TEST_CASE("emit_report: single cell is marked best") {
    const std::string md = emit_report(TaskKind::summarization(Lang::Python),
                                       {method_summary("basic", {{"BLEU", 0.5}})},
                                       ReportFormat::Markdown);
    CHECK(md.find("**0.5000**") != std::string::npos);
}

TEST_CASE("emit_report: ties mark all best methods") {
    const auto doc = emit_report(
        TaskKind::summarization(Lang::Python),
        {method_summary("a", {{"BLEU", 0.5}}), method_summary("b", {{"BLEU", 0.5}})},
        ReportFormat::Json);
    const json parsed = json::parse(doc);
    CHECK(parsed.at("best").at("BLEU").size() == 2);
}

TEST_CASE("emit_report: api recommendation column order is SR@1 SR@3 SR@5 MRR") {
    const auto doc = emit_report(
        TaskKind::api_recommendation(),
        {method_summary("basic", {{"SR@1", 0.1}, {"SR@3", 0.2}, {"SR@5", 0.3}, {"MRR", 0.15}}),
         method_summary("ape", {{"SR@1", 0.2}, {"SR@3", 0.3}, {"SR@5", 0.4}, {"MRR", 0.25}}),
         method_summary("cot", {{"SR@1", 0.15}, {"SR@3", 0.25}, {"SR@5", 0.35}, {"MRR", 0.2}})},
        ReportFormat::Json);
    const json parsed = json::parse(doc);
    CHECK(parsed.at("columns") == json::array({"SR@1", "SR@3", "SR@5", "MRR"}));

    const std::string csv = emit_report(
        TaskKind::api_recommendation(),
        {method_summary("basic", {{"SR@1", 0.1}, {"SR@3", 0.2}, {"SR@5", 0.3}, {"MRR", 0.15}})},
        ReportFormat::Csv);
    CHECK(csv.find("method,SR@1,SR@3,SR@5,MRR") == 0);
}

TEST_CASE("translation and summarization column orders") {
    CHECK(task_metric_columns(TaskType::CodeTranslation) ==
          std::vector<std::string>{"CB", "SM", "DM", "BLEU"});
    CHECK(task_metric_columns(TaskType::CodeSummarization) ==
          std::vector<std::string>{"BLEU", "ROUGE-L", "METEOR"});
}

TEST_CASE("token efficiency table carries a signed delta against the first row") {
    const std::string md = emit_token_report(
        {{"opro", 41.92}, {"ape", 35.16}}, ReportFormat::Markdown);
    CHECK(md.find("41.9200") != std::string::npos);
    CHECK(md.find("-6.7600") != std::string::npos);

    const json parsed = json::parse(
        emit_token_report({{"opro", 41.92}, {"ape", 35.16}}, ReportFormat::Json));
    CHECK(parsed[0].at("delta").is_null());
    CHECK(parsed[1].at("delta").get<double>() == doctest::Approx(-6.76));
}

TEST_CASE("unknown report format is a configuration error") {
    CHECK_THROWS_AS(parse_report_format("pdf"), Error);
    CHECK(parse_report_format("md") == ReportFormat::Markdown);
}

// --- experiment loop ----------------------------------------------------------

namespace {

struct TempTree {
    std::filesystem::path root;
    explicit TempTree(const std::string& name) : root(name) {
        std::filesystem::remove_all(root);
        std::filesystem::create_directories(root);
    }
    ~TempTree() { std::filesystem::remove_all(root); }
    std::string path(const std::string& leaf) const { return (root / leaf).string(); }
};

void write_translation_dataset(const std::string& path, int n) {
    std::ofstream out(path);
    for (int i = 0; i < n; ++i) {
        json obj;
        obj["id"] = "t" + std::to_string(i);
        obj["task"] = "translation";
        obj["source_lang"] = "python";
        obj["target_lang"] = "java";
        obj["input"] = "print(" + std::to_string(i) + ")";
        obj["references"] = json::array({"System.out.println(" + std::to_string(i) + ");"});
        out << obj.dump() << "\n";
    }
}

void write_mock_script(const std::string& path, int n) {
    json mock;
    mock["strict"] = false;
    mock["rules"] = json::array();
    for (int i = 0; i < n; ++i) {
        // Echo the expected translation for each sample prompt.
        mock["rules"].push_back({{"contains", "print(" + std::to_string(i) + ")"},
                                 {"text", "System.out.println(" + std::to_string(i) + ");"}});
    }
    std::ofstream out(path);
    out << mock.dump();
}

ExperimentConfig translation_config(const TempTree& tree, int n_samples) {
    write_translation_dataset(tree.path("test.jsonl"), n_samples);
    write_mock_script(tree.path("mock.json"), n_samples);
    KvConfig kv;
    kv.set("task", "translation");
    kv.set("source_lang", "python");
    kv.set("target_lang", "java");
    kv.set("method", "basic");
    kv.set("test", tree.path("test.jsonl"));
    kv.set("mock", tree.path("mock.json"));
    kv.set("repeats", "1");
    kv.set("seed", "7");
    ExperimentConfig cfg = build_experiment_config(kv);
    cfg.out_dir = tree.path("runs");
    return cfg;
}

}  // namespace

TEST_CASE("run_experiment: one run, per-sample records for every metric") {
    TempTree tree("test_harness_run1");
    ExperimentConfig cfg = translation_config(tree, 3);
    const ExperimentResult result = run_experiment(cfg);
    CHECK(result.complete);
    REQUIRE(result.runs.size() == 1);
    CHECK(result.runs[0].aggregates.at("CB") == doctest::Approx(1.0));
    CHECK(result.runs[0].aggregates.at("BLEU") == doctest::Approx(1.0));

    // 3 samples x 4 metrics persisted.
    const auto records = read_jsonl(std::filesystem::path(result.run_dir) / "metrics.jsonl");
    CHECK(records.size() == 12);
    const auto raw = read_jsonl(std::filesystem::path(result.run_dir) / "raw_outputs.jsonl");
    CHECK(raw.size() == 3);
    CHECK(std::filesystem::exists(std::filesystem::path(result.run_dir) / "report.json"));
    CHECK(std::filesystem::exists(std::filesystem::path(result.run_dir) / "config.txt"));
}

TEST_CASE("run_experiment: deterministic mock across repeats gives cv 0") {
    TempTree tree("test_harness_run2");
    ExperimentConfig cfg = translation_config(tree, 3);
    cfg.repeats = 5;
    const ExperimentResult result = run_experiment(cfg);
    REQUIRE(result.runs.size() == 5);
    for (const auto& [metric, summary] : result.summary) {
        CHECK(summary.std == 0.0);
        if (summary.cv_defined) CHECK(summary.cv == 0.0);
        CHECK(summary.n_runs == 5);
    }
    // Identical run aggregates.
    for (int r = 1; r < 5; ++r) {
        CHECK(result.runs[size_t(r)].aggregates == result.runs[0].aggregates);
    }
}

TEST_CASE("run_experiment: sample_cap keeps the first N samples in order") {
    TempTree tree("test_harness_run3");
    ExperimentConfig cfg = translation_config(tree, 3);
    cfg.sample_cap = 2;
    const ExperimentResult result = run_experiment(cfg);
    const auto raw = read_jsonl(std::filesystem::path(result.run_dir) / "raw_outputs.jsonl");
    REQUIRE(raw.size() == 2);
    CHECK(raw[0].at("sample_id") == "t0");
    CHECK(raw[1].at("sample_id") == "t1");
}

TEST_CASE("run_experiment: nonexistent dataset fails before creating a run dir") {
    TempTree tree("test_harness_run4");
    KvConfig kv;
    kv.set("task", "translation");
    kv.set("source_lang", "python");
    kv.set("target_lang", "java");
    kv.set("method", "basic");
    kv.set("test", tree.path("missing.jsonl"));
    kv.set("mock", tree.path("mock.json"));
    ExperimentConfig cfg = build_experiment_config(kv);
    cfg.out_dir = tree.path("runs");
    CHECK_THROWS_AS(run_experiment(cfg), Error);
    CHECK(!std::filesystem::exists(tree.path("runs")));
}

TEST_CASE("rebuild_report reproduces the stored JSON report byte-for-byte") {
    TempTree tree("test_harness_run5");
    ExperimentConfig cfg = translation_config(tree, 3);
    cfg.repeats = 2;
    const ExperimentResult result = run_experiment(cfg);
    const std::string stored =
        read_text_file(std::filesystem::path(result.run_dir) / "report.json");
    const std::string rebuilt = rebuild_report(result.run_dir, ReportFormat::Json);
    CHECK(stored == rebuilt);
}

TEST_CASE("run_compare: a run against itself has zero deltas and p=1") {
    TempTree tree("test_harness_run6");
    // Imperfect outputs so per-sample values vary across samples.
    write_translation_dataset(tree.path("test.jsonl"), 4);
    json mock;
    mock["strict"] = false;
    mock["rules"] = json::array();
    mock["rules"].push_back({{"contains", "print(0)"},
                             {"text", "System.out.println(0);"}});
    mock["default"] = {{"text", "int broken = 1;"}};
    {
        std::ofstream out(tree.path("mock.json"));
        out << mock.dump();
    }
    KvConfig kv;
    kv.set("task", "translation");
    kv.set("source_lang", "python");
    kv.set("target_lang", "java");
    kv.set("method", "basic");
    kv.set("test", tree.path("test.jsonl"));
    kv.set("mock", tree.path("mock.json"));
    kv.set("repeats", "1");
    ExperimentConfig cfg = build_experiment_config(kv);
    cfg.out_dir = tree.path("runs");
    const ExperimentResult result = run_experiment(cfg);

    const std::string doc = run_compare(result.run_dir, result.run_dir, ReportFormat::Json);
    const json parsed = json::parse(doc);
    for (const json& metric : parsed.at("metrics")) {
        CHECK(metric.at("delta").get<double>() == 0.0);
        CHECK(metric.at("p").get<double>() == 1.0);
        CHECK(!metric.at("significant_at_05").get<bool>());
    }
}

TEST_CASE("run_compare: disjoint sample ids name the first mismatch") {
    TempTree tree("test_harness_run7");
    ExperimentConfig cfg_a = translation_config(tree, 3);
    const ExperimentResult run_a = run_experiment(cfg_a);

    // Second run over a dataset with different ids.
    {
        std::ofstream out(tree.path("test2.jsonl"));
        json obj;
        obj["id"] = "zz9";
        obj["task"] = "translation";
        obj["source_lang"] = "python";
        obj["target_lang"] = "java";
        obj["input"] = "print(0)";
        obj["references"] = json::array({"System.out.println(0);"});
        out << obj.dump() << "\n";
    }
    KvConfig kv;
    kv.set("task", "translation");
    kv.set("source_lang", "python");
    kv.set("target_lang", "java");
    kv.set("method", "cot");
    kv.set("test", tree.path("test2.jsonl"));
    kv.set("mock", tree.path("mock.json"));
    kv.set("repeats", "1");
    ExperimentConfig cfg_b = build_experiment_config(kv);
    cfg_b.out_dir = tree.path("runs_b");
    const ExperimentResult run_b = run_experiment(cfg_b);

    try {
        run_compare(run_a.run_dir, run_b.run_dir, ReportFormat::Markdown);
        FAIL("expected mismatch error");
    } catch (const Error& e) {
        const std::string what = e.what();
        CHECK((what.find("t0") != std::string::npos || what.find("zz9") != std::string::npos));
    }
}

TEST_CASE("run_experiment with the mock backend is bit-reproducible for a fixed seed") {
    TempTree tree("test_harness_repro");
    ExperimentConfig cfg = translation_config(tree, 3);
    cfg.repeats = 2;
    cfg.out_dir = tree.path("runs_a");
    const ExperimentResult a = run_experiment(cfg);
    cfg.out_dir = tree.path("runs_b");
    const ExperimentResult b = run_experiment(cfg);
    CHECK(read_text_file(std::filesystem::path(a.run_dir) / "metrics.jsonl") ==
          read_text_file(std::filesystem::path(b.run_dir) / "metrics.jsonl"));
    CHECK(read_text_file(std::filesystem::path(a.run_dir) / "raw_outputs.jsonl") ==
          read_text_file(std::filesystem::path(b.run_dir) / "raw_outputs.jsonl"));
    CHECK(read_text_file(std::filesystem::path(a.run_dir) / "report.json") ==
          read_text_file(std::filesystem::path(b.run_dir) / "report.json"));
}

TEST_CASE("run_compare: planted strictly-better method is significant at n>=30") {
    TempTree tree("test_harness_planted");
    write_translation_dataset(tree.path("test.jsonl"), 32);

    // Run A: broken outputs everywhere. Run B: perfect translations.
    {
        json mock;
        mock["strict"] = false;
        mock["default"] = {{"text", "int broken;"}};
        std::ofstream out(tree.path("mock_a.json"));
        out << mock.dump();
    }
    write_mock_script(tree.path("mock_b.json"), 32);

    auto make_cfg = [&](const std::string& method, const std::string& mock,
                        const std::string& out_dir) {
        KvConfig kv;
        kv.set("task", "translation");
        kv.set("source_lang", "python");
        kv.set("target_lang", "java");
        kv.set("method", method);
        kv.set("test", tree.path("test.jsonl"));
        kv.set("mock", tree.path(mock));
        kv.set("repeats", "1");
        ExperimentConfig cfg = build_experiment_config(kv);
        cfg.out_dir = tree.path(out_dir);
        return cfg;
    };
    const ExperimentResult run_a = run_experiment(make_cfg("basic", "mock_a.json", "ra"));
    const ExperimentResult run_b = run_experiment(make_cfg("cot", "mock_b.json", "rb"));

    const json cmp = json::parse(run_compare(run_a.run_dir, run_b.run_dir, ReportFormat::Json));
    for (const json& metric : cmp.at("metrics")) {
        CHECK(metric.at("delta").get<double>() > 0.0);
        CHECK(metric.at("significant_at_05").get<bool>());
        CHECK(metric.at("n_pairs").get<int>() == 32);

        // Independent verification of the emitted t statistic from the
        // persisted per-sample values.
        const std::string name = metric.at("metric").get<std::string>();
        std::map<std::string, double> values_a, values_b;
        for (const json& rec : read_jsonl(std::filesystem::path(run_a.run_dir) /
                                          "metrics.jsonl")) {
            if (rec.at("metric") == name) {
                values_a[rec.at("sample_id").get<std::string>()] =
                    rec.at("value").get<double>();
            }
        }
        for (const json& rec : read_jsonl(std::filesystem::path(run_b.run_dir) /
                                          "metrics.jsonl")) {
            if (rec.at("metric") == name) {
                values_b[rec.at("sample_id").get<std::string>()] =
                    rec.at("value").get<double>();
            }
        }
        // Textbook paired t on the aligned differences (b - a).
        std::vector<double> diffs;
        for (const auto& [id, vb] : values_b) diffs.push_back(vb - values_a.at(id));
        double mean = 0.0;
        for (double d : diffs) mean += d;
        mean /= static_cast<double>(diffs.size());
        double ss = 0.0;
        for (double d : diffs) ss += (d - mean) * (d - mean);
        const double sd = std::sqrt(ss / (static_cast<double>(diffs.size()) - 1.0));
        if (sd > 0.0 && !metric.at("t").is_null()) {
            const double expected_t =
                mean / (sd / std::sqrt(static_cast<double>(diffs.size())));
            CHECK(metric.at("t").get<double>() == doctest::Approx(expected_t).epsilon(1e-9));
        }
        // token-efficiency companion table present with both methods.
        CHECK(cmp.contains("token_efficiency"));
    }
}

TEST_CASE("run_experiment validates datasets up front") {
    TempTree tree("test_harness_run8");
    {
        std::ofstream out(tree.path("bad.jsonl"));
        json obj;
        obj["id"] = "x";
        obj["task"] = "translation";
        obj["source_lang"] = "python";
        obj["target_lang"] = "java";
        obj["input"] = "print(1)";
        obj["references"] = json::array();  // violation: empty references
        out << obj.dump() << "\n";
    }
    write_mock_script(tree.path("mock.json"), 1);
    KvConfig kv;
    kv.set("task", "translation");
    kv.set("source_lang", "python");
    kv.set("target_lang", "java");
    kv.set("method", "basic");
    kv.set("test", tree.path("bad.jsonl"));
    kv.set("mock", tree.path("mock.json"));
    ExperimentConfig cfg = build_experiment_config(kv);
    cfg.out_dir = tree.path("runs");
    CHECK_THROWS_AS(run_experiment(cfg), Error);
}
