#pragma once

#include <functional>

namespace tsallis::oracle {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;

    /// Throws DomainError unless both tolerances are > 0 and
    /// max_subdivisions >= 1.
    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;  // estimated
    int subdivisions = 0;
};

/// Result of a peak-normalised half-line integral: the integral equals
/// exp(log_value) with relative error about rel_error.
struct LogQuadResult {
    double log_value = 0.0;
    double rel_error = 0.0;
    int subdivisions = 0;
};

/// Globally adaptive Gauss-Legendre quadrature on [a, b]. Each panel is
/// integrated with a 15-point rule and with the same rule on both halves;
/// their difference is the panel's error estimate. The panel with the largest
/// error is bisected until the total error is below
/// max(abs_tol, rel_tol * |value|). Throws ConvergenceError when the
/// subdivision budget runs out first.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec = {});

/// Integral of f over (0, inf) with t = scale * exp(y), y = s / (1 - s^2),
/// s in (-1, 1). The log map removes the t^{p-1} endpoint singularity of
/// gamma-type integrands; the rational map compacts the real line.
/// Non-finite integrand values produced at extreme t are treated as zero.
QuadResult integrate_half_line(const std::function<double(double)>& f,
                               const QuadratureSpec& spec = {}, double scale = 1.0);

/// Integral of exp(log_f(t)) over (0, inf). The integrand is rescaled by its
/// peak (located on a coarse grid in ln t) before integration so that very
/// large or very small magnitudes such as Gamma(90) do not overflow.
LogQuadResult integrate_half_line_log(const std::function<double(double)>& log_f,
                                      const QuadratureSpec& spec = {});

}  // namespace tsallis::oracle
