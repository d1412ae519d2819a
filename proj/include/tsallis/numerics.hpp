#pragma once

// Special-function kernel used by every closed form in the library.
// All functions are pure and thread-safe.

namespace tsallis::numerics {

/// Strictly positive finite real. Construction throws DomainError otherwise.
class PositiveReal {
public:
    PositiveReal(double value);  // NOLINT(google-explicit-constructor): used as a checked double

    double value() const noexcept { return value_; }
    operator double() const noexcept { return value_; }  // NOLINT

private:
    double value_;
};

/// ln Γ(x) for x > 0.
double ln_gamma(PositiveReal x);

/// Ψ(x) = d/dx ln Γ(x) for x > 0.
double digamma(PositiveReal x);

/// Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a).
///
/// Series expansion below x = a + 1, Lentz continued fraction for the upper
/// tail above it. Throws ConvergenceError if either fails to reach 1e-14
/// within 500 iterations.
double reg_lower_inc_gamma(PositiveReal a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// without the cancellation of the subtraction.
double reg_upper_inc_gamma(PositiveReal a, double x);

/// Quantile of the chi-square distribution with `dof` degrees of freedom:
/// the x with P(dof/2, x/2) = p. Requires 0 < p < 1.
double chi_square_quantile(PositiveReal dof, double p);

/// ln Γ(a) - ln Γ(b). Exponentiate the result only when the ratio itself is
/// needed; callers composing several ratios should stay in log space.
double log_gamma_ratio(PositiveReal a, PositiveReal b);

}  // namespace tsallis::numerics
