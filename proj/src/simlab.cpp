#include "tsallis/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "tsallis/errors.hpp"
#include "tsallis/numerics.hpp"
#include "tsallis/rng.hpp"

namespace tsallis::simlab {

namespace {

int resolve_threads(const RunOptions& opts, int work) {
    int t = opts.threads;
    if (t <= 0) t = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return std::clamp(t, 1, std::max(1, work));
}

// Runs body(begin, end) over contiguous chunks of [0, count). If any chunk
// throws, the exception of the lowest-indexed failing chunk is rethrown, so
// the error reported does not depend on scheduling.
template <class Body>
void parallel_chunks(int count, const RunOptions& opts, Body body) {
    const int threads = resolve_threads(opts, count);
    if (threads == 1) {
        body(0, count);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        const int begin = static_cast<int>(static_cast<long long>(count) * w / threads);
        const int end = static_cast<int>(static_cast<long long>(count) * (w + 1) / threads);
        pool.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void check_replications(int M) {
    if (M < kMinReplications) {
        throw DomainError(fmt::format("M must be >= {} (got M={})", kMinReplications, M));
    }
}

struct MeanSe {
    double mean;
    double se;
};

MeanSe mean_se(const std::vector<double>& x) {
    const std::size_t m = x.size();
    const double mean = pairwise_sum(x.data(), m) / static_cast<double>(m);
    std::vector<double> sq(m);
    for (std::size_t i = 0; i < m; ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
    const double var = m > 1 ? pairwise_sum(sq.data(), m) / static_cast<double>(m - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(m))};
}

std::vector<EstimatorSpec> comparison_specs() {
    return {{EstimatorKind::Baee, {}, {}}, {EstimatorKind::Stein, {}, {}}, {EstimatorKind::BzSmooth, {}, {}}};
}

}  // namespace

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

std::vector<std::vector<double>> replicate_losses(const EntropicConfig& cfg, const PopulationParams& params,
                                                  const std::vector<EstimatorSpec>& specs, int M,
                                                  std::uint64_t seed, const RunOptions& opts) {
    params.validate(cfg.k());
    if (M < 1) throw DomainError("replication count must be >= 1");
    std::vector<estimators::EstimatorPlan> plans;
    plans.reserve(specs.size());
    for (const auto& s : specs) plans.emplace_back(cfg, s);
    const double target = expmodel::theta(cfg, params.sigma);

    std::vector<std::vector<double>> losses(specs.size(), std::vector<double>(M));
    parallel_chunks(M, opts, [&](int begin, int end) {
        expmodel::SampleMatrix data(cfg.k(), cfg.n());
        expmodel::SummaryStats stats;
        for (int m = begin; m < end; ++m) {
            rng::SplitMix64 gen(rng::substream(seed, static_cast<std::uint64_t>(m)));
            expmodel::sample_into(params, gen, data);
            try {
                expmodel::summarize_into(data, stats);
            } catch (const DegenerateSampleError& e) {
                throw DegenerateSampleError(fmt::format("replication {}: {}", m, e.what()));
            }
            for (std::size_t j = 0; j < plans.size(); ++j) {
                const double ratio = plans[j].apply(stats).value / target - 1.0;
                losses[j][m] = ratio * ratio;
            }
        }
    });
    return losses;
}

PairedRiskReport mc_risk_paired(const EntropicConfig& cfg, const PopulationParams& params,
                                const std::vector<EstimatorSpec>& specs, int M, std::uint64_t seed,
                                const RunOptions& opts) {
    check_replications(M);
    if (specs.empty()) throw DomainError("at least one estimator is required");
    const auto losses = replicate_losses(cfg, params, specs, M, seed, opts);
    PairedRiskReport out;
    std::vector<double> diff(M);
    for (std::size_t j = 0; j < specs.size(); ++j) {
        const auto r = mean_se(losses[j]);
        out.reports.push_back({specs[j].kind, r.mean, r.se, M, seed});
        for (int m = 0; m < M; ++m) diff[m] = losses[0][m] - losses[j][m];
        const auto d = mean_se(diff);
        out.diff_mean.push_back(d.mean);
        out.diff_se.push_back(d.se);
    }
    return out;
}

RiskReport mc_risk(const EntropicConfig& cfg, const PopulationParams& params, const EstimatorSpec& spec,
                   int M, std::uint64_t seed, const RunOptions& opts) {
    return mc_risk_paired(cfg, params, {spec}, M, seed, opts).reports.front();
}

double pri(double baseline_risk, double improved_risk) {
    if (!(baseline_risk > 0.0)) {
        throw DomainError(fmt::format("PRI needs a baseline risk > 0 (got {})", baseline_risk));
    }
    return (baseline_risk - improved_risk) / baseline_risk * 100.0;
}

double pri(const RiskReport& baseline, const RiskReport& improved) {
    return pri(baseline.risk_mean, improved.risk_mean);
}

void ExperimentGrid::validate() const {
    check_replications(M);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("grid sigma must be > 0");
    if (k < 1) throw DomainError("grid k must be >= 1");
    if (u_values.empty() || q_values.empty() || n_values.empty()) {
        throw DomainError("grid needs at least one u, q and n value");
    }
    for (const auto& u : u_values) {
        if (static_cast<int>(u.size()) != k) {
            throw DomainError(fmt::format("grid location vector has {} entries, k={}", u.size(), k));
        }
        for (double ui : u) {
            if (!std::isfinite(ui)) throw DomainError("grid locations must be finite");
        }
    }
    for (int n : n_values) {
        for (double q : q_values) EntropicConfig(k, n, q);
    }
}

std::vector<PriCell> run_grid(const ExperimentGrid& grid, const RunOptions& opts) {
    grid.validate();
    std::vector<PriCell> cells;
    cells.reserve(grid.cell_count());
    const auto specs = comparison_specs();
    std::uint64_t index = 0;
    for (const auto& u : grid.u_values) {
        for (double q : grid.q_values) {
            for (int n : grid.n_values) {
                const EntropicConfig cfg(grid.k, n, q);
                const PopulationParams params{u, grid.sigma};
                const auto r = mc_risk_paired(cfg, params, specs, grid.M, rng::substream(grid.base_seed, index),
                                              opts);
                PriCell cell;
                cell.u = u;
                cell.q = q;
                cell.n = n;
                cell.baseline_risk = r.reports[0].risk_mean;
                cell.risk_stein = r.reports[1].risk_mean;
                cell.risk_bz = r.reports[2].risk_mean;
                cell.pri_stein = pri(r.reports[0], r.reports[1]);
                cell.pri_bz = pri(r.reports[0], r.reports[2]);
                cell.se_baseline = r.reports[0].std_error;
                cell.se_diff_stein = r.diff_se[1];
                cell.se_diff_bz = r.diff_se[2];
                cells.push_back(std::move(cell));
                ++index;
            }
        }
    }
    return cells;
}

namespace {

ExperimentGrid table_grid(std::vector<int> n_values, int M, std::uint64_t seed) {
    ExperimentGrid g;
    for (int i = 1; i <= 6; ++i) g.u_values.push_back({i / 10.0});
    g.q_values = {0.2, 0.4, 0.6, 0.8, 1.2, 1.4};
    g.n_values = std::move(n_values);
    g.sigma = 1.0;
    g.k = 1;
    g.M = M;
    g.base_seed = seed;
    return g;
}

}  // namespace

ExperimentGrid table1_grid(int M, std::uint64_t seed) { return table_grid({4, 6, 8}, M, seed); }
ExperimentGrid table2_grid(int M, std::uint64_t seed) { return table_grid({10, 15, 20, 30}, M, seed); }

double ci_coverage(const EntropicConfig& cfg, const PopulationParams& params, double alpha_level, int M,
                   std::uint64_t seed, const RunOptions& opts) {
    params.validate(cfg.k());
    check_replications(M);
    if (!(alpha_level > 0.0 && alpha_level < 1.0)) {
        throw DomainError(fmt::format("alpha must satisfy 0<alpha<1 (got {})", alpha_level));
    }
    const double target = expmodel::theta(cfg, params.sigma);
    std::vector<char> hit(M, 0);
    parallel_chunks(M, opts, [&](int begin, int end) {
        expmodel::SampleMatrix data(cfg.k(), cfg.n());
        expmodel::SummaryStats stats;
        for (int m = begin; m < end; ++m) {
            rng::SplitMix64 gen(rng::substream(seed, static_cast<std::uint64_t>(m)));
            expmodel::sample_into(params, gen, data);
            try {
                expmodel::summarize_into(data, stats);
            } catch (const DegenerateSampleError& e) {
                throw DegenerateSampleError(fmt::format("replication {}: {}", m, e.what()));
            }
            const auto ci = estimators::confidence_interval(stats, cfg, alpha_level);
            hit[m] = ci.lower <= target && target <= ci.upper;
        }
    });
    const auto covered = std::count(hit.begin(), hit.end(), 1);
    return static_cast<double>(covered) / M;
}

double exact_risk_k1(const EntropicConfig& cfg, double u_over_sigma, const EstimatorSpec& spec,
                     const oracle::QuadratureSpec& quad) {
    if (cfg.k() != 1) throw DomainError("exact_risk_k1 needs k = 1");
    if (!std::isfinite(u_over_sigma)) throw DomainError("location must be finite");
    const estimators::EstimatorPlan plan(cfg, spec);
    const double n = cfg.n();
    const double m = cfg.pooled_shape();
    const double log_norm = numerics::ln_gamma(m);

    // Inner integrals are solved two orders tighter so their noise does not
    // stall the outer error estimate.
    oracle::QuadratureSpec inner_quad = quad;
    inner_quad.abs_tol *= 1e-2;
    inner_quad.rel_tol *= 1e-2;

    expmodel::SummaryStats stats;
    stats.k = 1;
    stats.n = cfg.n();
    stats.x_min.assign(1, 0.0);
    stats.w.assign(1, 0.0);

    // X^(1) = u + E / n with E ~ Exp(1); T ~ Gamma(n-1, 1) independent.
    auto inner = [&](double x) {
        auto f = [&](double t) {
            stats.t = t;
            stats.x_min[0] = x;
            stats.w[0] = x / t;
            const double dev = plan.apply(stats).value - 1.0;
            return std::exp((m - 1.0) * std::log(t) - t - log_norm) * dev * dev;
        };
        return oracle::integrate_half_line(f, inner_quad, m).value;
    };
    auto outer = [&](double e) { return n * std::exp(-n * e) * inner(u_over_sigma + e); };
    return oracle::integrate_half_line(outer, quad, 1.0 / n).value;
}

FigureData pri_vs_q(const std::vector<double>& u_values, const std::vector<double>& q_values, int n,
                    double sigma, int M, std::uint64_t seed, const RunOptions& opts) {
    ExperimentGrid g;
    for (double u : u_values) g.u_values.push_back({u});
    for (double q : q_values) {
        if (q != 1.0) g.q_values.push_back(q);
    }
    g.n_values = {n};
    g.sigma = sigma;
    g.M = M;
    g.base_seed = seed;
    FigureData fig{FigureKind::PriVsQ, {"u", "q", "n", "pri_bz"}, {}};
    for (const auto& c : run_grid(g, opts)) fig.rows.push_back({c.u[0], c.q, double(c.n), c.pri_bz});
    return fig;
}

FigureData risk_per_sample(const EntropicConfig& cfg, double u, double sigma, int samples, std::uint64_t seed) {
    if (samples < 1) throw DomainError("sample count must be >= 1");
    const PopulationParams params{std::vector<double>(cfg.k(), u), sigma};
    params.validate(cfg.k());
    const auto specs = comparison_specs();
    const auto losses = replicate_losses(cfg, params, specs, samples, seed, RunOptions{1});
    const double line = estimators::baee_risk_closed_form(cfg);
    FigureData fig{FigureKind::RiskPerSample, {"sample", "loss_baee", "loss_stein", "loss_bz", "baee_risk"}, {}};
    for (int i = 0; i < samples; ++i) {
        fig.rows.push_back({double(i + 1), losses[0][i], losses[1][i], losses[2][i], line});
    }
    return fig;
}

FigureData pri_vs_n(const std::vector<int>& n_values, double q, double u, double sigma, int M,
                    std::uint64_t seed, const RunOptions& opts) {
    ExperimentGrid g;
    g.u_values = {{u}};
    g.q_values = {q};
    g.n_values = n_values;
    g.sigma = sigma;
    g.M = M;
    g.base_seed = seed;
    FigureData fig{FigureKind::PriVsN, {"n", "pri_stein", "pri_bz"}, {}};
    for (const auto& c : run_grid(g, opts)) fig.rows.push_back({double(c.n), c.pri_stein, c.pri_bz});
    return fig;
}

FigureData figure_preset(std::string_view name, int M, std::uint64_t seed, const RunOptions& opts) {
    if (name == "fig1") {
        std::vector<double> q;
        for (int i = 1; i < 30; ++i) {
            if (i != 20) q.push_back(i / 20.0);
        }
        return pri_vs_q({0.0, 0.1, 0.2, 0.3, 0.4, 0.5}, q, 4, 1.0, M, seed, opts);
    }
    if (name == "fig3") return risk_per_sample(EntropicConfig(1, 4, 0.1), 0.1, 1.0, 50, seed);
    if (name == "fig4") return risk_per_sample(EntropicConfig(1, 8, 0.1), 0.1, 1.0, 50, seed);
    if (name == "fig5") {
        std::vector<int> n;
        for (int i = 2; i <= 50; ++i) n.push_back(i);
        return pri_vs_n(n, 0.1, 0.1, 1.0, M, seed, opts);
    }
    throw ParseError(fmt::format("unknown figure preset '{}' (expected fig1, fig3, fig4 or fig5)", name));
}

}  // namespace tsallis::simlab
