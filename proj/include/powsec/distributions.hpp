#pragma once

namespace powsec::dist {

/// Regularized lower incomplete gamma P(a, x).
[[nodiscard]] double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
[[nodiscard]] double regularized_gamma_q(double a, double x);
/// Regularized incomplete beta I_x(a, b).
[[nodiscard]] double regularized_beta(double a, double b, double x);

/// Upper-tail probabilities.
[[nodiscard]] double chi_squared_sf(double x, double df);
[[nodiscard]] double f_sf(double x, double df1, double df2);
/// Two-sided p-value of a Student t statistic.
[[nodiscard]] double student_t_two_sided(double t, double df);

[[nodiscard]] double normal_cdf(double x);

}  // namespace powsec::dist
