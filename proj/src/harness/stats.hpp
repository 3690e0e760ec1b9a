#pragma once

#include <map>
#include <string>
#include <vector>

namespace apg {

/// Across-run aggregate for one metric. std is the population standard
/// deviation (the literal reading of CV = sigma/mu); a sample-std variant
/// is available by flag.
struct StatSummary {
    double mean = 0.0;
    double std = 0.0;
    double cv = 0.0;
    bool cv_defined = true;  // false when mean == 0
    int n_runs = 0;
};

StatSummary summarize(const std::vector<double>& values, bool sample_std = false);

/// Per-metric summaries across runs. Every run must report the same metric
/// set; a mismatch is a precondition error naming the differing metric.
/// Permutation-invariant in the run order.
std::map<std::string, StatSummary> aggregate(
    const std::vector<std::map<std::string, double>>& run_values, bool sample_std = false);

struct TTestResult {
    double t_statistic = 0.0;
    double p_value = 1.0;
    int n_pairs = 0;
    bool significant_at_05 = false;
    bool degenerate = false;  // zero variance of differences with nonzero mean
};

/// Two-tailed paired t-test on elementwise differences, p from the
/// Student-t CDF with n-1 degrees of freedom. Zero-variance differences:
/// zero mean gives t=0, p=1; nonzero mean gives p=0 with the degenerate
/// flag (t is +-infinity in memory, serialized as null).
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

/// P(T <= t) for Student's t with df degrees of freedom.
double student_t_cdf(double t, int df);

/// Regularized incomplete beta function I_x(a, b); exposed for tests.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace apg
