#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsallis/expmodel.hpp"

// Estimators of Theta(sigma) = sigma^{k(1-q)}. Every estimator has the form
//
//     delta = multiplier * base^{k(1-q)}
//
// where base is the pooled statistic T (or T + alpha for the Bayes rule) and
// the multiplier is either a constant (MLE, BAEE, Bayes) or a function of the
// location ratios W = X^(1) / T (Stein, Brewster-Zidek).
namespace tsallis::estimators {

using expmodel::EntropicConfig;
using expmodel::SummaryStats;

enum class EstimatorKind { Mle, Baee, Stein, BzFinite, BzSmooth, Bayes };

/// CLI spelling: mle, baee, stein, bz-finite, bz-smooth, bayes.
std::string_view to_string(EstimatorKind kind);
/// Throws ParseError on an unknown name.
EstimatorKind parse_kind(std::string_view name);

struct Estimate {
    double value = 0.0;
    EstimatorKind kind = EstimatorKind::Baee;
    double multiplier = 0.0;  // c0, c1-clipped psi*, d(r,0), Phi*, (kn)^{-k(1-q)} or Bayes ratio
    double base = 0.0;        // T, or T + alpha for the Bayes rule
};

/// Upper corner r of the box B_r = (0, r_1] x ... x (0, r_k].
class BoxBound {
public:
    explicit BoxBound(std::vector<double> r);
    std::span<const double> r() const noexcept { return r_; }

private:
    std::vector<double> r_;
};

/// Inverse-gamma prior IG(alpha, beta) on sigma, density
/// alpha^beta / Gamma(beta) * sigma^{-(beta+1)} exp(-alpha / sigma).
struct IGPrior {
    double alpha;
    double beta;

    /// Throws DomainError unless alpha > 0 and beta > 0.
    void validate() const;
};

/// Largest k supported by the 2^k subset sum in d_r0.
inline constexpr int kMaxSubsetPopulations = 20;

double c0(const EntropicConfig& cfg);
double c1(const EntropicConfig& cfg);

Estimate mle_plugin(const SummaryStats& stats, const EntropicConfig& cfg);
Estimate baee(const SummaryStats& stats, const EntropicConfig& cfg);
Estimate stein(const SummaryStats& stats, const EntropicConfig& cfg);

/// Minimizer d(r, 0) of the conditional risk given W in B_r at zero
/// locations:
///
///   c0 * sum_S (-1)^|S| (1 + n R_S)^{-A1} / sum_S (-1)^|S| (1 + n R_S)^{-A2}
///
/// with S ranging over subsets of {1..k}, R_S = sum_{i in S} r_i,
/// A1 = k(n-1) + k(1-q) and A2 = k(n-1) + 2k(1-q).
double d_r0(const EntropicConfig& cfg, std::span<const double> r);
double d_r0(const EntropicConfig& cfg, const BoxBound& r);

Estimate bz_finite(const SummaryStats& stats, const EntropicConfig& cfg, const BoxBound& r);
Estimate bz_smooth(const SummaryStats& stats, const EntropicConfig& cfg);
Estimate bayes(const SummaryStats& stats, const EntropicConfig& cfg, const IGPrior& prior);

/// Constant risk of the BAEE under quadratic loss.
double baee_risk_closed_form(const EntropicConfig& cfg);

struct Interval {
    double lower;
    double upper;
};

/// Equal-tailed 1 - alpha_level interval for sigma^{k(1-q)} from the pivot
/// 2T/sigma ~ chi-square with 2k(n-1) degrees of freedom. Endpoints are
/// returned sorted whatever the sign of k(1-q).
Interval confidence_interval(const SummaryStats& stats, const EntropicConfig& cfg, double alpha_level);

/// Estimator choice plus its extra parameters (box for bz-finite, prior for
/// bayes).
struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::Baee;
    std::optional<BoxBound> box;
    std::optional<IGPrior> prior;
};

/// Precomputes the gamma-function constants of one estimator for a fixed
/// configuration so that repeated evaluation costs only a few pow/log calls.
class EstimatorPlan {
public:
    EstimatorPlan(const EntropicConfig& cfg, EstimatorSpec spec);

    Estimate apply(const SummaryStats& stats) const;
    double multiplier(const SummaryStats& stats) const;

    const EstimatorSpec& spec() const noexcept { return spec_; }
    const EntropicConfig& config() const noexcept { return cfg_; }

private:
    double d_smooth(std::span<const double> r) const;

    EntropicConfig cfg_;
    EstimatorSpec spec_;
    double power_;
    double c0_;
    double c1_;
    double a1_;
    double a2_;
    double constant_;  // mle factor, bayes ratio or d(r,0) for the fixed box
};

}  // namespace tsallis::estimators
