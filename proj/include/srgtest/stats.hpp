#pragma once

#include <cstddef>
#include <vector>

namespace srgtest::stats {

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a Student t statistic with `df` degrees of freedom.
double t_test_p_value(double t, double df);

/// One-sample two-sided t-test of the sample mean against mu0.
/// Zero-variance samples give p = 1 when the mean matches mu0 and p = 0 otherwise.
double one_sample_t_p_value(const std::vector<double>& samples, double mu0);

/// Asymptotic p-value of a one-sample Kolmogorov-Smirnov statistic d at size n,
/// using the standard small-sample correction of the effective sqrt(n).
double ks_p_value(double d, std::size_t n);

/// Survival function of the Kolmogorov distribution, Q(lambda) = P(K > lambda).
double kolmogorov_q(double lambda);

double mean(const std::vector<double>& xs);
double sample_stddev(const std::vector<double>& xs);

}  // namespace srgtest::stats
