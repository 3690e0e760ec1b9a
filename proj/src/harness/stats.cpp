#include "harness/stats.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace apg {

StatSummary summarize(const std::vector<double>& values, bool sample_std) {
    if (values.empty()) throw Error(ErrorCode::InvalidArgument, "summarize: no values");
    StatSummary s;
    s.n_runs = static_cast<int>(values.size());

    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());

    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double denom = sample_std ? static_cast<double>(values.size()) - 1.0
                                    : static_cast<double>(values.size());
    s.std = denom > 0.0 ? std::sqrt(ss / denom) : 0.0;

    if (s.mean != 0.0) {
        s.cv = s.std / s.mean;
        s.cv_defined = true;
    } else {
        s.cv = 0.0;
        s.cv_defined = false;
    }
    return s;
}

std::map<std::string, StatSummary> aggregate(
    const std::vector<std::map<std::string, double>>& run_values, bool sample_std) {
    if (run_values.empty()) throw Error(ErrorCode::InvalidArgument, "aggregate: no reports");

    const auto& first = run_values.front();
    for (const auto& run : run_values) {
        for (const auto& [metric, value] : run) {
            if (first.find(metric) == first.end()) {
                throw Error(ErrorCode::InvalidArgument,
                            "aggregate: metric \"" + metric + "\" missing from the first report");
            }
        }
        for (const auto& [metric, value] : first) {
            if (run.find(metric) == run.end()) {
                throw Error(ErrorCode::InvalidArgument,
                            "aggregate: metric \"" + metric + "\" missing from a report");
            }
        }
    }

    std::map<std::string, StatSummary> out;
    for (const auto& [metric, unused] : first) {
        std::vector<double> values;
        values.reserve(run_values.size());
        for (const auto& run : run_values) values.push_back(run.at(metric));
        out[metric] = summarize(values, sample_std);
    }
    return out;
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 300;
    constexpr double kEps = 3.0e-16;
    constexpr double kFpMin = 1.0e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= kMaxIterations; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
        b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, int df) {
    if (df < 1) throw Error(ErrorCode::InvalidArgument, "student_t_cdf: df must be >= 1");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double x = static_cast<double>(df) / (static_cast<double>(df) + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::InvalidArgument, "paired_t_test: length mismatch");
    }
    if (a.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "paired_t_test: need at least 2 pairs");
    }

    const size_t n = a.size();
    std::vector<double> diff(n);
    double mean = 0.0;
    for (size_t i = 0; i < n; ++i) {
        diff[i] = a[i] - b[i];
        mean += diff[i];
    }
    mean /= static_cast<double>(n);

    double ss = 0.0;
    for (double d : diff) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / (static_cast<double>(n) - 1.0));

    TTestResult result;
    result.n_pairs = static_cast<int>(n);
    if (sd == 0.0) {
        if (mean == 0.0) {
            result.t_statistic = 0.0;
            result.p_value = 1.0;
        } else {
            result.t_statistic = mean > 0 ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
            result.p_value = 0.0;
            result.degenerate = true;
        }
    } else {
        result.t_statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
        const double tail = 1.0 - student_t_cdf(std::fabs(result.t_statistic),
                                                static_cast<int>(n) - 1);
        result.p_value = 2.0 * tail;
    }
    result.significant_at_05 = result.p_value < 0.05;
    return result;
}

}  // namespace apg
