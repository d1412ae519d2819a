#include "tsallis/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "tsallis/errors.hpp"
#include "tsallis/numerics.hpp"

namespace tsallis::estimators {

namespace {

// (1 + x)^{-A}
double inv_pow1p(double x, double a) { return std::exp(-a * std::log1p(x)); }

// sum over subsets S of h (sorted descending) of (-1)^|S| (1 + x + h_S)^{-A}.
//
// The outer recursion peels off the largest increments, where the difference
// of the two branches is O(1); the last (smallest) increment is handled in
// closed form with expm1 so a small h keeps its relative accuracy.
double alternating_subset_sum(double a, std::span<const double> h, double x) {
    if (h.size() == 1) {
        return inv_pow1p(x, a) * -std::expm1(-a * std::log1p(h[0] / (1.0 + x)));
    }
    const auto rest = h.subspan(1);
    return alternating_subset_sum(a, rest, x) - alternating_subset_sum(a, rest, x + h[0]);
}

// TODO: for k >= 2 with several r_i below ~1e-4 the outer differences still
// lose digits (roughly eps / prod of the non-smallest n r_i); a series
// expansion in the small increments would fix it.
double box_ratio(int n, double a1, double a2, std::span<const double> r) {
    std::vector<double> h(r.size());
    std::transform(r.begin(), r.end(), h.begin(), [n](double ri) { return n * ri; });
    std::sort(h.begin(), h.end(), std::greater<>());
    return alternating_subset_sum(a1, h, 0.0) / alternating_subset_sum(a2, h, 0.0);
}

void check_box(const EntropicConfig& cfg, std::span<const double> r) {
    if (cfg.k() > kMaxSubsetPopulations) {
        throw CapacityError(fmt::format("d(r,0) enumerates 2^k subsets; k={} exceeds the limit of {}",
                                        cfg.k(), kMaxSubsetPopulations));
    }
    if (static_cast<int>(r.size()) != cfg.k()) {
        throw DomainError(fmt::format("box bound needs {} values, got {}", cfg.k(), r.size()));
    }
    for (double ri : r) {
        if (!(ri > 0.0) || !std::isfinite(ri)) {
            throw DomainError(fmt::format("box bound entries must be finite and > 0 (got {})", ri));
        }
    }
}

bool all_positive(std::span<const double> w) {
    return std::all_of(w.begin(), w.end(), [](double v) { return v > 0.0; });
}

bool inside_box(std::span<const double> w, std::span<const double> r) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0 && w[i] <= r[i])) return false;
    }
    return true;
}

double gamma_ratio(double a, double b) { return std::exp(numerics::log_gamma_ratio(a, b)); }

void check_stats(const SummaryStats& stats, const EntropicConfig& cfg) {
    if (!(stats.t > 0.0)) throw DegenerateSampleError("pooled statistic T must be > 0");
    if (stats.k != cfg.k() || static_cast<int>(stats.w.size()) != cfg.k()) {
        throw DomainError(fmt::format("statistics describe k={} populations, configuration has k={}",
                                      stats.k, cfg.k()));
    }
}

}  // namespace

std::string_view to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::Mle: return "mle";
        case EstimatorKind::Baee: return "baee";
        case EstimatorKind::Stein: return "stein";
        case EstimatorKind::BzFinite: return "bz-finite";
        case EstimatorKind::BzSmooth: return "bz-smooth";
        case EstimatorKind::Bayes: return "bayes";
    }
    return "unknown";
}

EstimatorKind parse_kind(std::string_view name) {
    for (auto kind : {EstimatorKind::Mle, EstimatorKind::Baee, EstimatorKind::Stein,
                      EstimatorKind::BzFinite, EstimatorKind::BzSmooth, EstimatorKind::Bayes}) {
        if (to_string(kind) == name) return kind;
    }
    throw ParseError(fmt::format(
        "unknown method '{}' (expected mle, baee, stein, bz-finite, bz-smooth or bayes)", name));
}

BoxBound::BoxBound(std::vector<double> r) : r_(std::move(r)) {
    if (r_.empty()) throw DomainError("box bound must have at least one entry");
    for (double ri : r_) {
        if (!(ri > 0.0) || !std::isfinite(ri)) {
            throw DomainError(fmt::format("box bound entries must be finite and > 0 (got {})", ri));
        }
    }
}

void IGPrior::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha) || !(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError(
            fmt::format("inverse-gamma prior needs alpha>0 and beta>0 (got alpha={}, beta={})", alpha, beta));
    }
}

double c0(const EntropicConfig& cfg) {
    const double m = cfg.pooled_shape();
    const double a = cfg.power();
    return gamma_ratio(m + a, m + 2.0 * a);
}

double c1(const EntropicConfig& cfg) {
    const double m = static_cast<double>(cfg.k()) * cfg.n();
    const double a = cfg.power();
    return gamma_ratio(m + a, m + 2.0 * a);
}

double d_r0(const EntropicConfig& cfg, std::span<const double> r) {
    check_box(cfg, r);
    const double m = cfg.pooled_shape();
    const double a = cfg.power();
    return c0(cfg) * box_ratio(cfg.n(), m + a, m + 2.0 * a, r);
}

double d_r0(const EntropicConfig& cfg, const BoxBound& r) { return d_r0(cfg, r.r()); }

Estimate mle_plugin(const SummaryStats& stats, const EntropicConfig& cfg) {
    return EstimatorPlan(cfg, {EstimatorKind::Mle, {}, {}}).apply(stats);
}

Estimate baee(const SummaryStats& stats, const EntropicConfig& cfg) {
    return EstimatorPlan(cfg, {EstimatorKind::Baee, {}, {}}).apply(stats);
}

Estimate stein(const SummaryStats& stats, const EntropicConfig& cfg) {
    return EstimatorPlan(cfg, {EstimatorKind::Stein, {}, {}}).apply(stats);
}

Estimate bz_finite(const SummaryStats& stats, const EntropicConfig& cfg, const BoxBound& r) {
    return EstimatorPlan(cfg, {EstimatorKind::BzFinite, r, {}}).apply(stats);
}

Estimate bz_smooth(const SummaryStats& stats, const EntropicConfig& cfg) {
    return EstimatorPlan(cfg, {EstimatorKind::BzSmooth, {}, {}}).apply(stats);
}

Estimate bayes(const SummaryStats& stats, const EntropicConfig& cfg, const IGPrior& prior) {
    return EstimatorPlan(cfg, {EstimatorKind::Bayes, {}, prior}).apply(stats);
}

double baee_risk_closed_form(const EntropicConfig& cfg) {
    const double m = cfg.pooled_shape();
    const double a = cfg.power();
    const double log_ratio = 2.0 * numerics::ln_gamma(m + a) - numerics::ln_gamma(m + 2.0 * a) -
                             numerics::ln_gamma(m);
    return -std::expm1(log_ratio);
}

Interval confidence_interval(const SummaryStats& stats, const EntropicConfig& cfg, double alpha_level) {
    check_stats(stats, cfg);
    if (!(alpha_level > 0.0 && alpha_level < 1.0)) {
        throw DomainError(fmt::format("alpha must satisfy 0<alpha<1 (got {})", alpha_level));
    }
    const double a = cfg.power();
    const double dof = 2.0 * cfg.pooled_shape();
    const double chi_lo = numerics::chi_square_quantile(dof, alpha_level / 2.0);
    const double chi_hi = numerics::chi_square_quantile(dof, 1.0 - alpha_level / 2.0);
    const double two_t = 2.0 * stats.t;
    const double e1 = std::pow(two_t / chi_hi, a);
    const double e2 = std::pow(two_t / chi_lo, a);
    return {std::min(e1, e2), std::max(e1, e2)};
}

EstimatorPlan::EstimatorPlan(const EntropicConfig& cfg, EstimatorSpec spec)
    : cfg_(cfg), spec_(std::move(spec)), power_(cfg.power()), c0_(c0(cfg)), c1_(c1(cfg)) {
    const double m = cfg.pooled_shape();
    a1_ = m + power_;
    a2_ = m + 2.0 * power_;
    constant_ = c0_;
    switch (spec_.kind) {
        case EstimatorKind::Mle:
            constant_ = std::pow(static_cast<double>(cfg.k()) * cfg.n(), -power_);
            break;
        case EstimatorKind::BzFinite:
            if (!spec_.box) throw DomainError("bz-finite needs a box bound r");
            constant_ = d_r0(cfg, *spec_.box);
            break;
        case EstimatorKind::BzSmooth:
            if (cfg.k() > kMaxSubsetPopulations) {
                throw CapacityError(fmt::format("bz-smooth supports k <= {} (got k={})",
                                                kMaxSubsetPopulations, cfg.k()));
            }
            break;
        case EstimatorKind::Bayes: {
            if (!spec_.prior) throw DomainError("bayes needs an inverse-gamma prior (alpha, beta)");
            spec_.prior->validate();
            const double b = spec_.prior->beta;
            if (!(a2_ + b > 0.0) || !(a1_ + b > 0.0)) {
                throw DomainError(fmt::format(
                    "bayes needs k(n-1)+2k(1-q)+beta > 0 (got {})", a2_ + b));
            }
            constant_ = gamma_ratio(a1_ + b, a2_ + b);
            break;
        }
        case EstimatorKind::Baee:
        case EstimatorKind::Stein:
            break;
    }
}

double EstimatorPlan::d_smooth(std::span<const double> r) const {
    return c0_ * box_ratio(cfg_.n(), a1_, a2_, r);
}

double EstimatorPlan::multiplier(const SummaryStats& stats) const {
    switch (spec_.kind) {
        case EstimatorKind::Mle:
        case EstimatorKind::Bayes:
            return constant_;
        case EstimatorKind::Baee:
            return c0_;
        case EstimatorKind::Stein: {
            if (!all_positive(stats.w)) return c0_;
            double wsum = 0.0;
            for (double wi : stats.w) wsum += wi;
            const double shrunk = c1_ * std::pow(1.0 + cfg_.n() * wsum, power_);
            return cfg_.q() < 1.0 ? std::min(c0_, shrunk) : std::max(c0_, shrunk);
        }
        case EstimatorKind::BzFinite:
            return inside_box(stats.w, spec_.box->r()) ? constant_ : c0_;
        case EstimatorKind::BzSmooth:
            return all_positive(stats.w) ? d_smooth(stats.w) : c0_;
    }
    return c0_;
}

Estimate EstimatorPlan::apply(const SummaryStats& stats) const {
    check_stats(stats, cfg_);
    const double base = spec_.kind == EstimatorKind::Bayes ? stats.t + spec_.prior->alpha : stats.t;
    const double mult = multiplier(stats);
    return {mult * std::pow(base, power_), spec_.kind, mult, base};
}

}  // namespace tsallis::estimators
