#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tsallis/rng.hpp"

// k independent two-parameter exponential populations Exp(u_i, sigma) with a
// common scale, n observations each.
namespace tsallis::expmodel {

/// Problem instance (k populations, n observations each, entropic index q).
/// Construction enforces k >= 1, n >= 2, 0 < q < (n+1)/2 and q != 1.
class EntropicConfig {
public:
    EntropicConfig(int k, int n, double q);

    int k() const noexcept { return k_; }
    int n() const noexcept { return n_; }
    double q() const noexcept { return q_; }

    /// k(n-1): shape of the gamma law of T at sigma = 1.
    double pooled_shape() const noexcept { return static_cast<double>(k_) * (n_ - 1); }
    /// k(1-q): every estimator is multiplier * T^{k(1-q)}.
    double power() const noexcept { return k_ * (1.0 - q_); }

private:
    int k_;
    int n_;
    double q_;
};

/// Throws DomainError unless q > 0 and q != 1.
void check_entropic_index(double q);

struct PopulationParams {
    std::vector<double> u;  // location of each population
    double sigma = 1.0;     // common scale

    /// Throws DomainError on sigma <= 0 or u.size() != k.
    void validate(int k) const;
};

/// Row-major k x n matrix of observations; row i is population i.
class SampleMatrix {
public:
    SampleMatrix() = default;
    SampleMatrix(int k, int n) : k_(k), n_(n), values_(static_cast<std::size_t>(k) * n) {}
    SampleMatrix(int k, int n, std::vector<double> values);

    int k() const noexcept { return k_; }
    int n() const noexcept { return n_; }

    double operator()(int i, int j) const { return values_[index(i, j)]; }
    double& operator()(int i, int j) { return values_[index(i, j)]; }

    std::span<const double> row(int i) const {
        return {values_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
    }
    std::span<double> row(int i) {
        return {values_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
    }
    const std::vector<double>& values() const noexcept { return values_; }

    bool operator==(const SampleMatrix&) const = default;

private:
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

    int k_ = 0;
    int n_ = 0;
    std::vector<double> values_;
};

/// Sufficient statistics (X^(1), T) plus the ratios W_i = X_i^(1) / T.
struct SummaryStats {
    std::vector<double> x_min;
    double t = 0.0;
    std::vector<double> w;
    int k = 0;
    int n = 0;
};

/// Pooled deviation from known locations, S = sum_ij (x_ij - u_i).
struct KnownLocationStat {
    double s = 0.0;
};

/// Density (1/sigma) exp(-(x-u)/sigma), closed at x = u.
double pdf(double x, double u, double sigma);

/// Inverse-CDF sample x_ij = u_i - sigma ln U_ij with U_ij uniform on (0,1].
/// Row i is filled from consecutive draws of a SplitMix64 stream started at
/// `seed`.
SampleMatrix sample(const EntropicConfig& cfg, const PopulationParams& params, std::uint64_t seed);

/// Same as `sample` but draws from `gen` into a preallocated k x n matrix.
void sample_into(const PopulationParams& params, rng::SplitMix64& gen, SampleMatrix& out);

/// Throws DegenerateSampleError when T = 0, DomainError when k < 1 or n < 2.
SummaryStats summarize(const SampleMatrix& data);

/// Buffer-reusing variant used inside simulation loops.
void summarize_into(const SampleMatrix& data, SummaryStats& out);

/// Throws InconsistentLocationError if any x_ij < u_i.
KnownLocationStat summarize_known_location(const SampleMatrix& data, std::span<const double> u);

/// Tsallis entropy of a single Exp(u, sigma) population.
double tsallis_single(double q, double sigma);

/// Joint Tsallis entropy of k independent populations with common sigma:
/// (1 - Delta^k) / (q - 1) with Delta = 1 / (q sigma^{q-1}).
double tsallis_joint(int k, double q, double sigma);
double tsallis_joint(const EntropicConfig& cfg, double sigma);

/// Estimand Theta(sigma) = sigma^{-k(q-1)}.
double theta(const EntropicConfig& cfg, double sigma);

/// CSV interchange: one population per row, '.' decimal, no header.
/// Ragged rows, empty input and non-numeric cells throw ParseError.
SampleMatrix read_sample_csv(std::istream& in);
void write_sample_csv(std::ostream& out, const SampleMatrix& data);

}  // namespace tsallis::expmodel
