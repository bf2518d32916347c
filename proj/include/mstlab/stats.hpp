#pragma once

#include <vector>

namespace mstlab {

double mean(const std::vector<double>& x);
double sample_variance(const std::vector<double>& x);  // n-1 denominator

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> x, std::vector<double> y);

// Survival function of the Kolmogorov distribution.
double kolmogorov_q(double lambda);

// Upper tail of the chi-square distribution with df degrees of freedom.
double chi2_pvalue(double statistic, int df);

// Regularized incomplete gamma functions.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace mstlab
