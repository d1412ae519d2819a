#include "tsallis/oracle.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "tsallis/errors.hpp"
#include "tsallis/numerics.hpp"

namespace tsallis::oracle {

namespace {

// log of the integral over (0, inf) of t^{p-1} e^{-t} prod_i (1 - e^{-h_i t}).
double log_gamma_type_integral(double p, std::span<const double> h, const QuadratureSpec& spec) {
    if (!(p > 0.0)) {
        throw DomainError(fmt::format("moment integral diverges: exponent p={} must be > 0", p));
    }
    auto log_f = [&](double t) {
        double v = (p - 1.0) * std::log(t) - t;
        for (double hi : h) v += std::log(-std::expm1(-hi * t));
        return v;
    };
    return integrate_half_line_log(log_f, spec).log_value;
}

void check_box(const EntropicConfig& cfg, std::span<const double> r) {
    if (static_cast<int>(r.size()) != cfg.k()) {
        throw DomainError(fmt::format("box bound needs {} values, got {}", cfg.k(), r.size()));
    }
    for (double ri : r) {
        if (!(ri > 0.0) || !std::isfinite(ri)) throw DomainError("box bound entries must be > 0");
    }
}

// log of the integral over sigma of sigma^{-(shape+power+1)} e^{-scale/sigma}.
double log_posterior_integral(double shape, double scale, double power, const QuadratureSpec& spec) {
    auto log_f = [&](double sigma) { return -(shape + power + 1.0) * std::log(sigma) - scale / sigma; };
    return integrate_half_line_log(log_f, spec).log_value;
}

void check_posterior_inputs(const EntropicConfig& cfg, const IGPrior& prior, double t) {
    prior.validate();
    if (!(t > 0.0)) throw DomainError("posterior needs t > 0");
    const double a = cfg.power();
    const double shape = cfg.pooled_shape() + prior.beta;
    if (!(shape + a > 0.0) || !(shape + 2.0 * a > 0.0)) {
        throw DomainError("posterior moments need k(n-1)+2k(1-q)+beta > 0");
    }
}

double rel_gap(double a, double b) {
    const double denom = std::max(std::abs(a), std::abs(b));
    return denom == 0.0 ? 0.0 : std::abs(a - b) / denom;
}

}  // namespace

double moment_T(const EntropicConfig& cfg, double a, const QuadratureSpec& spec) {
    const double m = cfg.pooled_shape();
    if (!(m + a > 0.0)) {
        throw DomainError(fmt::format("E[T^a] diverges for a={} <= -k(n-1)={}", a, -m));
    }
    return std::exp(log_gamma_type_integral(m + a, {}, spec) - log_gamma_type_integral(m, {}, spec));
}

double c0_oracle(const EntropicConfig& cfg, const QuadratureSpec& spec) {
    const double m = cfg.pooled_shape();
    const double a = cfg.power();
    return std::exp(log_gamma_type_integral(m + a, {}, spec) -
                    log_gamma_type_integral(m + 2.0 * a, {}, spec));
}

double c1_oracle(const EntropicConfig& cfg, const QuadratureSpec& spec) {
    const double m = static_cast<double>(cfg.k()) * cfg.n();
    const double a = cfg.power();
    return std::exp(log_gamma_type_integral(m + a, {}, spec) -
                    log_gamma_type_integral(m + 2.0 * a, {}, spec));
}

double d_r0_oracle(const EntropicConfig& cfg, std::span<const double> r, const QuadratureSpec& spec) {
    check_box(cfg, r);
    std::vector<double> h(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) h[i] = cfg.n() * r[i];
    const double m = cfg.pooled_shape();
    const double a = cfg.power();
    return std::exp(log_gamma_type_integral(m + a, h, spec) -
                    log_gamma_type_integral(m + 2.0 * a, h, spec));
}

double box_moment_integrand(const EntropicConfig& cfg, std::span<const double> r, double p, double t) {
    check_box(cfg, r);
    double v = std::pow(t, p - 1.0) * std::exp(-t);
    for (double ri : r) v *= -std::expm1(-cfg.n() * ri * t);
    return v;
}

double posterior_density(const EntropicConfig& cfg, const IGPrior& prior, double t, double sigma) {
    prior.validate();
    if (!(t > 0.0) || !(sigma > 0.0)) throw DomainError("posterior density needs t > 0 and sigma > 0");
    const double shape = cfg.pooled_shape() + prior.beta;
    const double scale = t + prior.alpha;
    const double log_h = -(shape + 1.0) * std::log(sigma) - scale / sigma + shape * std::log(scale) -
                         numerics::ln_gamma(shape);
    return std::exp(log_h);
}

double posterior_moment_integrand(const EntropicConfig& cfg, const IGPrior& prior, double t,
                                  double power, double sigma) {
    prior.validate();
    const double shape = cfg.pooled_shape() + prior.beta;
    return std::exp(-(shape + power + 1.0) * std::log(sigma) - (t + prior.alpha) / sigma);
}

double bayes_factor_oracle(const EntropicConfig& cfg, const IGPrior& prior, double t,
                           const QuadratureSpec& spec) {
    check_posterior_inputs(cfg, prior, t);
    const double shape = cfg.pooled_shape() + prior.beta;
    const double scale = t + prior.alpha;
    const double a = cfg.power();
    return std::exp(log_posterior_integral(shape, scale, a, spec) -
                    log_posterior_integral(shape, scale, 2.0 * a, spec));
}

double posterior_mass(const EntropicConfig& cfg, const IGPrior& prior, double t, const QuadratureSpec& spec) {
    prior.validate();
    if (!(t > 0.0)) throw DomainError("posterior needs t > 0");
    auto log_f = [&](double sigma) { return std::log(posterior_density(cfg, prior, t, sigma)); };
    return std::exp(integrate_half_line_log(log_f, spec).log_value);
}

double constant_multiplier_risk_oracle(const EntropicConfig& cfg, double c, const QuadratureSpec& spec) {
    const double a = cfg.power();
    const double e1 = moment_T(cfg, a, spec);
    const double e2 = moment_T(cfg, 2.0 * a, spec);
    return c * c * e2 - 2.0 * c * e1 + 1.0;
}

double baee_risk_oracle(const EntropicConfig& cfg, const QuadratureSpec& spec) {
    return constant_multiplier_risk_oracle(cfg, c0_oracle(cfg, spec), spec);
}

std::vector<CheckRow> run_oracle_check(const CheckGrid& grid, const QuadratureSpec& spec) {
    std::vector<CheckRow> rows;
    auto push = [&](std::string quantity, const EntropicConfig& cfg, std::string param, double closed,
                    double oracle) {
        CheckRow row;
        row.quantity = std::move(quantity);
        row.k = cfg.k();
        row.n = cfg.n();
        row.q = cfg.q();
        row.param = std::move(param);
        row.closed_form = closed;
        row.oracle = oracle;
        row.abs_gap = std::abs(closed - oracle);
        row.rel_gap = rel_gap(closed, oracle);
        row.tolerance = grid.tolerance;
        row.pass = row.rel_gap <= grid.tolerance;
        rows.push_back(std::move(row));
    };

    const std::vector<std::vector<double>> box_patterns = {
        {0.05, 0.05, 0.05}, {0.5, 0.5, 0.5}, {2.0, 2.0, 2.0}, {0.3, 1.1, 2.7}};
    const std::vector<IGPrior> priors = {{1.0, 1.0}, {0.5, 3.0}};
    const std::vector<double> t_values = {0.7, 5.0};

    for (int k : grid.k_values) {
        for (int n : grid.n_values) {
            for (double q : grid.q_values) {
                if (!(q < (n + 1) / 2.0) || q == 1.0) continue;
                const EntropicConfig cfg(k, n, q);
                push("c0", cfg, "", estimators::c0(cfg), c0_oracle(cfg, spec));
                push("c1", cfg, "", estimators::c1(cfg), c1_oracle(cfg, spec));
                for (const auto& pattern : box_patterns) {
                    std::vector<double> r(pattern.begin(), pattern.begin() + std::min<std::size_t>(k, 3));
                    r.resize(k, pattern.back());
                    push("d_r0", cfg, fmt::format("r={}", fmt::join(r, ";")), estimators::d_r0(cfg, r),
                         d_r0_oracle(cfg, r, spec));
                }
                for (const auto& prior : priors) {
                    for (double t : t_values) {
                        expmodel::SummaryStats stats;
                        stats.k = k;
                        stats.n = n;
                        stats.t = t;
                        stats.x_min.assign(k, 0.0);
                        stats.w.assign(k, 0.0);
                        push("bayes", cfg,
                             fmt::format("alpha={};beta={};t={}", prior.alpha, prior.beta, t),
                             estimators::bayes(stats, cfg, prior).value,
                             bayes_factor_oracle(cfg, prior, t, spec));
                    }
                }
                push("baee_risk", cfg, "", estimators::baee_risk_closed_form(cfg), baee_risk_oracle(cfg, spec));
            }
        }
    }
    return rows;
}

}  // namespace tsallis::oracle
