#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tsallis/estimators.hpp"
#include "tsallis/expmodel.hpp"
#include "tsallis/quadrature.hpp"

// Seeded Monte-Carlo risk engine under the loss (delta/Theta - 1)^2.
//
// Streams: replication m of a run seeded with s draws from
// SplitMix64(substream(s, m)); grid cell number c (row order of the output)
// is seeded with substream(base_seed, c). All estimators of one run see the
// same samples. Losses are stored per replication and reduced by pairwise
// summation in replication order, so results do not depend on the number of
// threads.
namespace tsallis::simlab {

using estimators::EstimatorKind;
using estimators::EstimatorSpec;
using expmodel::EntropicConfig;
using expmodel::PopulationParams;

inline constexpr int kMinReplications = 1000;

struct RunOptions {
    int threads = 0;  // 0: std::thread::hardware_concurrency()
};

struct RiskReport {
    EstimatorKind kind = EstimatorKind::Baee;
    double risk_mean = 0.0;
    double std_error = 0.0;  // sample std of losses / sqrt(M)
    int M = 0;
    std::uint64_t seed = 0;
};

/// Risks of several estimators on common samples. diff_mean[j] and diff_se[j]
/// describe the per-replication difference loss[0] - loss[j] (zero for j = 0).
struct PairedRiskReport {
    std::vector<RiskReport> reports;
    std::vector<double> diff_mean;
    std::vector<double> diff_se;
};

/// Deterministic pairwise sum.
double pairwise_sum(const double* x, std::size_t n);

/// Per-replication losses, losses[j][m] for estimator j on replication m.
/// Throws DegenerateSampleError naming the first replication with T = 0.
std::vector<std::vector<double>> replicate_losses(const EntropicConfig& cfg, const PopulationParams& params,
                                                  const std::vector<EstimatorSpec>& specs, int M,
                                                  std::uint64_t seed, const RunOptions& opts = {});

/// Requires M >= kMinReplications.
RiskReport mc_risk(const EntropicConfig& cfg, const PopulationParams& params, const EstimatorSpec& spec,
                   int M, std::uint64_t seed, const RunOptions& opts = {});

PairedRiskReport mc_risk_paired(const EntropicConfig& cfg, const PopulationParams& params,
                                const std::vector<EstimatorSpec>& specs, int M, std::uint64_t seed,
                                const RunOptions& opts = {});

/// 100 * (baseline - improved) / baseline. Throws DomainError if the
/// baseline risk is not > 0.
double pri(const RiskReport& baseline, const RiskReport& improved);
double pri(double baseline_risk, double improved_risk);

struct ExperimentGrid {
    std::vector<std::vector<double>> u_values;  // each of size k
    std::vector<double> q_values;
    std::vector<int> n_values;
    double sigma = 1.0;
    int k = 1;
    int M = 10000;
    std::uint64_t base_seed = 0;

    /// Throws DomainError on M < kMinReplications, sigma <= 0, a location
    /// vector of the wrong size, or any invalid (n, q) pair.
    void validate() const;
    std::size_t cell_count() const { return u_values.size() * q_values.size() * n_values.size(); }
};

struct PriCell {
    std::vector<double> u;
    double q = 0.0;
    int n = 0;
    double pri_stein = 0.0;
    double pri_bz = 0.0;
    double baseline_risk = 0.0;
    // Not exported; kept for the dominance checks.
    double risk_stein = 0.0;
    double risk_bz = 0.0;
    double se_baseline = 0.0;
    double se_diff_stein = 0.0;  // SE of loss_baee - loss_stein
    double se_diff_bz = 0.0;
};

/// One cell per (u, q, n) in that nesting order (u outermost). Stein and
/// the smooth Brewster-Zidek rule are compared with the BAEE on common
/// samples.
std::vector<PriCell> run_grid(const ExperimentGrid& grid, const RunOptions& opts = {});

/// n in {4,6,8}, u in {0.1,...,0.6}, q in {0.2,0.4,0.6,0.8,1.2,1.4}: 108 cells.
ExperimentGrid table1_grid(int M, std::uint64_t seed);
/// Same u and q with n in {10,15,20,30}: 144 cells.
ExperimentGrid table2_grid(int M, std::uint64_t seed);

/// Fraction of M replications whose interval contains sigma^{k(1-q)}.
double ci_coverage(const EntropicConfig& cfg, const PopulationParams& params, double alpha_level, int M,
                   std::uint64_t seed, const RunOptions& opts = {});

/// Exact risk for k = 1 by nested quadrature over X^(1) - u and T (sigma = 1,
/// location u_over_sigma). Used to check trends that Monte-Carlo noise hides.
double exact_risk_k1(const EntropicConfig& cfg, double u_over_sigma, const EstimatorSpec& spec,
                     const oracle::QuadratureSpec& quad = {1e-12, 1e-8, 4000});

// ---- tables --------------------------------------------------------------

enum class TableFormat { Csv, Json };

/// Throws ParseError for anything other than "csv" or "json".
TableFormat parse_format(std::string_view name);

/// CSV: header u,q,n,pri_stein,pri_bz,baseline_risk; reals with 6 decimals;
/// a k > 1 location vector is written as its entries joined by ';'.
void write_table_csv(std::ostream& out, const std::vector<PriCell>& cells);
std::vector<PriCell> read_table_csv(std::istream& in);

/// JSON schema "tsallis-pri-table/1":
///   {"schema": "tsallis-pri-table/1",
///    "columns": ["u","q","n","pri_stein","pri_bz","baseline_risk"],
///    "cells": [{"u": [number...], "q": number, "n": integer,
///               "pri_stein": number, "pri_bz": number,
///               "baseline_risk": number > 0}, ...]}
void write_table_json(std::ostream& out, const std::vector<PriCell>& cells);
std::vector<PriCell> read_table_json(std::istream& in);
/// Throws ParseError describing the first schema violation.
void validate_table_json(std::string_view text);

void write_table(std::ostream& out, const std::vector<PriCell>& cells, TableFormat format);
/// Throws DomainError on empty cells and IoError if the path cannot be written.
void export_table(const std::vector<PriCell>& cells, TableFormat format, const std::string& path);

// ---- figure data ---------------------------------------------------------

enum class FigureKind { PriVsQ, RiskPerSample, PriVsN };

struct FigureData {
    FigureKind kind = FigureKind::PriVsQ;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// PRI of the Brewster-Zidek rule over a q grid (q = 1 skipped) for each u.
/// Columns u,q,n,pri_bz.
FigureData pri_vs_q(const std::vector<double>& u_values, const std::vector<double>& q_values, int n,
                    double sigma, int M, std::uint64_t seed, const RunOptions& opts = {});

/// Losses of the BAEE, Stein and Brewster-Zidek rules on `samples` seeded
/// samples plus the constant BAEE risk. Columns
/// sample,loss_baee,loss_stein,loss_bz,baee_risk.
FigureData risk_per_sample(const EntropicConfig& cfg, double u, double sigma, int samples,
                           std::uint64_t seed);

/// PRI of both improved rules as n varies. Columns n,pri_stein,pri_bz.
FigureData pri_vs_n(const std::vector<int>& n_values, double q, double u, double sigma, int M,
                    std::uint64_t seed, const RunOptions& opts = {});

/// Preset names fig1, fig3, fig4, fig5. Throws ParseError on other names.
FigureData figure_preset(std::string_view name, int M, std::uint64_t seed, const RunOptions& opts = {});

void write_figure_csv(std::ostream& out, const FigureData& fig);

}  // namespace tsallis::simlab
