#pragma once

#include <span>
#include <string>
#include <vector>

#include "tsallis/estimators.hpp"
#include "tsallis/expmodel.hpp"
#include "tsallis/quadrature.hpp"

// Quadrature ground truth for every closed form in `estimators`.
//
// Nothing here calls the estimator formulas or the gamma-function kernel:
// moments are ratios of integrals, so normalising constants such as
// Gamma(k(n-1)) cancel instead of being evaluated. The only exception is
// `posterior_density`, which exists to check the published normaliser.
namespace tsallis::oracle {

using estimators::IGPrior;
using expmodel::EntropicConfig;

/// E[T^a] at sigma = 1, T ~ Gamma(k(n-1), 1). Requires k(n-1) + a > 0.
double moment_T(const EntropicConfig& cfg, double a, const QuadratureSpec& spec = {});

/// E[T^{k(1-q)}] / E[T^{2k(1-q)}].
double c0_oracle(const EntropicConfig& cfg, const QuadratureSpec& spec = {});

/// Same ratio for S ~ Gamma(kn, 1), the statistic with known locations.
double c1_oracle(const EntropicConfig& cfg, const QuadratureSpec& spec = {});

/// E[T^{k(1-q)} | W in B_r] / E[T^{2k(1-q)} | W in B_r] at zero locations,
/// with conditional density proportional to
/// t^{k(n-1)-1} e^{-t} prod_i (1 - e^{-n r_i t}).
double d_r0_oracle(const EntropicConfig& cfg, std::span<const double> r, const QuadratureSpec& spec = {});

/// Unnormalised conditional integrand t^{p-1} e^{-t} prod_i (1 - e^{-n r_i t}).
double box_moment_integrand(const EntropicConfig& cfg, std::span<const double> r, double p, double t);

/// Posterior density of sigma given T = t under the IG(alpha, beta) prior
/// (closed-form normaliser).
double posterior_density(const EntropicConfig& cfg, const IGPrior& prior, double t, double sigma);

/// Unnormalised posterior moment integrand sigma^{-power} h(sigma | t).
double posterior_moment_integrand(const EntropicConfig& cfg, const IGPrior& prior, double t,
                                  double power, double sigma);

/// Bayes rule under quadratic loss in delta/Theta, computed as the ratio of
/// posterior moments E[Theta^{-1} | t] / E[Theta^{-2} | t] with
/// Theta = sigma^{k(1-q)}.
double bayes_factor_oracle(const EntropicConfig& cfg, const IGPrior& prior, double t,
                           const QuadratureSpec& spec = {});

/// Integral of the posterior density over sigma in (0, inf).
double posterior_mass(const EntropicConfig& cfg, const IGPrior& prior, double t,
                      const QuadratureSpec& spec = {});

/// Risk c^2 E[T^{2k(1-q)}] - 2c E[T^{k(1-q)}] + 1 of the estimator c T^{k(1-q)}.
double constant_multiplier_risk_oracle(const EntropicConfig& cfg, double c, const QuadratureSpec& spec = {});

/// The risk quadratic evaluated at c = c0_oracle(cfg).
double baee_risk_oracle(const EntropicConfig& cfg, const QuadratureSpec& spec = {});

/// One line of the closed-form versus quadrature comparison.
struct CheckRow {
    std::string quantity;  // c0, c1, d_r0, bayes, baee_risk
    int k = 0;
    int n = 0;
    double q = 0.0;
    std::string param;  // r vector, prior and t, or empty
    double closed_form = 0.0;
    double oracle = 0.0;
    double abs_gap = 0.0;
    double rel_gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CheckGrid {
    std::vector<int> k_values{1, 2, 3};
    std::vector<int> n_values{2, 4, 8};
    std::vector<double> q_values{0.2, 0.5, 0.8, 1.2, 1.4};
    double tolerance = 1e-8;
};

/// Compares c0, c1, d_r0 (several boxes), the Bayes rule (several priors and
/// t) and the BAEE risk with their oracles on every valid (k, n, q) of the
/// grid.
std::vector<CheckRow> run_oracle_check(const CheckGrid& grid = {}, const QuadratureSpec& spec = {});

}  // namespace tsallis::oracle
