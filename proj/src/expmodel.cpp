#include "tsallis/expmodel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "tsallis/errors.hpp"

namespace tsallis::expmodel {

void check_entropic_index(double q) {
    if (!(q > 0.0) || q == 1.0 || !std::isfinite(q)) {
        throw DomainError(fmt::format("q must satisfy q>0, q≠1 (got q={})", q));
    }
}

EntropicConfig::EntropicConfig(int k, int n, double q) : k_(k), n_(n), q_(q) {
    if (k < 1) throw DomainError(fmt::format("k must be >= 1 (got k={})", k));
    if (n < 2) throw DomainError(fmt::format("n must be >= 2 (got n={})", n));
    if (!(q > 0.0 && q < (n + 1) / 2.0) || q == 1.0 || !std::isfinite(q)) {
        throw DomainError(
            fmt::format("q must satisfy 0<q<(n+1)/2, q≠1 (got q={}, n={})", q, n));
    }
}

void PopulationParams::validate(int k) const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError(fmt::format("sigma must be > 0 (got sigma={})", sigma));
    }
    if (static_cast<int>(u.size()) != k) {
        throw DomainError(fmt::format("expected {} location values, got {}", k, u.size()));
    }
    for (double ui : u) {
        if (!std::isfinite(ui)) throw DomainError("location values must be finite");
    }
}

SampleMatrix::SampleMatrix(int k, int n, std::vector<double> values)
    : k_(k), n_(n), values_(std::move(values)) {
    if (values_.size() != static_cast<std::size_t>(k) * n) {
        throw DomainError("sample matrix size does not match k x n");
    }
}

double pdf(double x, double u, double sigma) {
    if (!(sigma > 0.0)) throw DomainError(fmt::format("sigma must be > 0 (got sigma={})", sigma));
    if (x < u) return 0.0;
    return std::exp(-(x - u) / sigma) / sigma;
}

void sample_into(const PopulationParams& params, rng::SplitMix64& gen, SampleMatrix& out) {
    for (int i = 0; i < out.k(); ++i) {
        const double ui = params.u[i];
        for (double& x : out.row(i)) x = ui - params.sigma * std::log(gen.uniform_open_closed());
    }
}

SampleMatrix sample(const EntropicConfig& cfg, const PopulationParams& params, std::uint64_t seed) {
    params.validate(cfg.k());
    SampleMatrix out(cfg.k(), cfg.n());
    rng::SplitMix64 gen(seed);
    sample_into(params, gen, out);
    return out;
}

void summarize_into(const SampleMatrix& data, SummaryStats& out) {
    const int k = data.k();
    const int n = data.n();
    if (k < 1 || n < 2) {
        throw DomainError(fmt::format("summarize needs k>=1 and n>=2 (got k={}, n={})", k, n));
    }
    out.k = k;
    out.n = n;
    out.x_min.resize(k);
    out.w.resize(k);
    double t = 0.0;
    for (int i = 0; i < k; ++i) {
        const auto row = data.row(i);
        const double m = *std::min_element(row.begin(), row.end());
        double dev = 0.0;
        for (double x : row) dev += x - m;
        out.x_min[i] = m;
        t += dev;
    }
    if (!(t > 0.0)) {
        throw DegenerateSampleError("pooled statistic T is zero (every population is constant)");
    }
    out.t = t;
    for (int i = 0; i < k; ++i) out.w[i] = out.x_min[i] / t;
}

SummaryStats summarize(const SampleMatrix& data) {
    SummaryStats out;
    summarize_into(data, out);
    return out;
}

KnownLocationStat summarize_known_location(const SampleMatrix& data, std::span<const double> u) {
    if (static_cast<int>(u.size()) != data.k()) {
        throw DomainError(fmt::format("expected {} location values, got {}", data.k(), u.size()));
    }
    double s = 0.0;
    for (int i = 0; i < data.k(); ++i) {
        for (double x : data.row(i)) {
            if (x < u[i]) {
                throw InconsistentLocationError(fmt::format(
                    "observation {} in population {} is below its location {}", x, i, u[i]));
            }
            s += x - u[i];
        }
    }
    if (!(s > 0.0)) throw DegenerateSampleError("statistic S is zero");
    return {s};
}

double tsallis_single(double q, double sigma) {
    return tsallis_joint(1, q, sigma);
}

double tsallis_joint(int k, double q, double sigma) {
    check_entropic_index(q);
    if (!(sigma > 0.0)) throw DomainError(fmt::format("sigma must be > 0 (got sigma={})", sigma));
    if (k < 1) throw DomainError(fmt::format("k must be >= 1 (got k={})", k));
    // Delta^k = exp(-k (ln q + (q-1) ln sigma))
    const double log_delta = -(std::log(q) + (q - 1.0) * std::log(sigma));
    return -std::expm1(k * log_delta) / (q - 1.0);
}

double tsallis_joint(const EntropicConfig& cfg, double sigma) {
    return tsallis_joint(cfg.k(), cfg.q(), sigma);
}

double theta(const EntropicConfig& cfg, double sigma) {
    if (!(sigma > 0.0)) throw DomainError(fmt::format("sigma must be > 0 (got sigma={})", sigma));
    return std::pow(sigma, cfg.power());
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, int line_no) {
    cell = trim(cell);
    double v = 0.0;
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ParseError(fmt::format("line {}: '{}' is not a number", line_no, cell));
    }
    return v;
}

}  // namespace

SampleMatrix read_sample_csv(std::istream& in) {
    std::vector<double> values;
    int k = 0;
    int n = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest = trim(line);
        if (rest.empty()) continue;
        int count = 0;
        while (true) {
            const auto comma = rest.find(',');
            values.push_back(parse_cell(rest.substr(0, comma), line_no));
            ++count;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (n < 0) {
            n = count;
        } else if (count != n) {
            throw ParseError(fmt::format(
                "line {}: ragged row with {} values, expected {} (populations must be balanced)",
                line_no, count, n));
        }
        ++k;
    }
    if (k == 0) throw ParseError("sample CSV is empty");
    return SampleMatrix(k, n, std::move(values));
}

void write_sample_csv(std::ostream& out, const SampleMatrix& data) {
    for (int i = 0; i < data.k(); ++i) {
        const auto row = data.row(i);
        for (int j = 0; j < data.n(); ++j) {
            if (j > 0) out << ',';
            out << fmt::format("{:.17g}", row[j]);
        }
        out << '\n';
    }
}

}  // namespace tsallis::expmodel
