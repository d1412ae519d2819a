#include "tsallis/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "tsallis/errors.hpp"

namespace tsallis::oracle {

namespace {

constexpr int kOrder = 15;

struct Rule {
    std::array<double, kOrder> nodes{};
    std::array<double, kOrder> weights{};
};

// Gauss-Legendre nodes by Newton iteration on P_n.
Rule make_rule() {
    Rule rule;
    for (int i = 0; i < kOrder; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= kOrder; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const Rule& rule() {
    static const Rule r = make_rule();
    return r;
}

double apply_rule(const std::function<double(double)>& f, double a, double b) {
    const auto& r = rule();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < kOrder; ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
    return sum * half;
}

struct Panel {
    double a, b;
    double left, right;  // rule on each half
    double err;

    double value() const { return left + right; }
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel make_panel(const std::function<double(double)>& f, double a, double b, double coarse) {
    const double m = 0.5 * (a + b);
    const double left = apply_rule(f, a, m);
    const double right = apply_rule(f, m, b);
    return {a, b, left, right, std::abs(left + right - coarse)};
}

// Adaptive integration over the union of the given initial panels.
QuadResult integrate_panels(const std::function<double(double)>& f, const std::vector<double>& edges,
                            const QuadratureSpec& spec) {
    spec.validate();
    std::vector<Panel> heap;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i];
        const double b = edges[i + 1];
        heap.push_back(make_panel(f, a, b, apply_rule(f, a, b)));
    }
    std::make_heap(heap.begin(), heap.end());
    double frozen_value = 0.0;
    double frozen_error = 0.0;
    int splits = 0;
    while (true) {
        // Re-sum from scratch; the heap is at most a few thousand panels.
        double value = frozen_value;
        double error = frozen_error;
        for (const auto& p : heap) {
            value += p.value();
            error += p.err;
        }
        if (!std::isfinite(value)) throw ConvergenceError("quadrature produced a non-finite value");
        if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value)) || heap.empty()) {
            return {value, error, splits};
        }
        if (splits >= spec.max_subdivisions) {
            throw ConvergenceError(fmt::format(
                "quadrature did not reach tolerance after {} subdivisions (estimate {}, error {})",
                splits, value, error));
        }
        std::pop_heap(heap.begin(), heap.end());
        const Panel worst = heap.back();
        heap.pop_back();
        const double m = 0.5 * (worst.a + worst.b);
        if (!(m > worst.a && m < worst.b) ||
            (worst.b - worst.a) <= 64.0 * std::numeric_limits<double>::epsilon() *
                                        std::max(std::abs(worst.a), std::abs(worst.b))) {
            // Cannot be refined further in double precision.
            frozen_value += worst.value();
            frozen_error += worst.err;
            continue;
        }
        heap.push_back(make_panel(f, worst.a, m, worst.left));
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(make_panel(f, m, worst.b, worst.right));
        std::push_heap(heap.begin(), heap.end());
        ++splits;
    }
}

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

}  // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
        throw DomainError("quadrature tolerances must be > 0 and max_subdivisions >= 1");
    }
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("integrate() needs finite limits; use integrate_half_line");
    }
    if (a == b) return {};
    if (a > b) {
        auto r = integrate(f, b, a, spec);
        r.value = -r.value;
        return r;
    }
    return integrate_panels(f, {a, b}, spec);
}

QuadResult integrate_half_line(const std::function<double(double)>& f, const QuadratureSpec& spec,
                               double scale) {
    if (!(scale > 0.0)) throw DomainError("integrate_half_line scale must be > 0");
    auto mapped = [&](double s) {
        const double d = 1.0 - s * s;
        if (d <= 0.0) return 0.0;
        const double y = s / d;
        if (y > 700.0 || y < -700.0) return 0.0;
        const double t = scale * std::exp(y);
        return finite_or_zero(f(t) * t * (1.0 + s * s) / (d * d));
    };
    std::vector<double> edges;
    constexpr int kInitialPanels = 16;
    for (int i = 0; i <= kInitialPanels; ++i) edges.push_back(-1.0 + 2.0 * i / kInitialPanels);
    return integrate_panels(mapped, edges, spec);
}

LogQuadResult integrate_half_line_log(const std::function<double(double)>& log_f,
                                      const QuadratureSpec& spec) {
    // g(y) = log integrand in y = ln t, including the Jacobian t.
    auto g = [&](double y) { return log_f(std::exp(y)) + y; };

    constexpr double kScanLo = -60.0;
    constexpr double kScanHi = 60.0;
    constexpr double kStep = 0.05;
    constexpr double kWindow = 40.0;  // e^-40 relative to peak ends the central window

    double gmax = -std::numeric_limits<double>::infinity();
    double ymax = 0.0;
    std::vector<std::pair<double, double>> scan;
    for (double y = kScanLo; y <= kScanHi + 1e-12; y += kStep) {
        const double v = g(y);
        scan.emplace_back(y, v);
        if (v > gmax) {
            gmax = v;
            ymax = y;
        }
    }
    if (!std::isfinite(gmax)) throw DomainError("log-integrand has no finite value on the scan grid");

    double ylo = ymax;
    double yhi = ymax;
    for (const auto& [y, v] : scan) {
        if (v >= gmax - kWindow) {
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    ylo -= kStep;
    yhi += kStep;

    auto scaled = [&](double y) { return finite_or_zero(std::exp(g(y) - gmax)); };

    // Central window split into panels of about one scan-step cluster each.
    std::vector<double> edges;
    const int panels = std::clamp(static_cast<int>((yhi - ylo) / 0.5), 4, 400);
    for (int i = 0; i <= panels; ++i) edges.push_back(ylo + (yhi - ylo) * i / panels);
    const QuadResult center = integrate_panels(scaled, edges, spec);

    // Tails: y = ylo - u/(1-u) and y = yhi + u/(1-u), u in [0, 1).
    auto left_tail = [&](double u) {
        const double d = 1.0 - u;
        if (d <= 0.0) return 0.0;
        return scaled(ylo - u / d) / (d * d);
    };
    auto right_tail = [&](double u) {
        const double d = 1.0 - u;
        if (d <= 0.0) return 0.0;
        return scaled(yhi + u / d) / (d * d);
    };
    QuadratureSpec tail_spec = spec;
    tail_spec.abs_tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(center.value)) * 0.5;
    const QuadResult left = integrate_panels(left_tail, {0.0, 0.5, 1.0}, tail_spec);
    const QuadResult right = integrate_panels(right_tail, {0.0, 0.5, 1.0}, tail_spec);

    const double total = center.value + left.value + right.value;
    if (!(total > 0.0)) throw DomainError("log-domain integral is not positive");
    const double err = center.abs_error + left.abs_error + right.abs_error;
    return {gmax + std::log(total), err / total,
            center.subdivisions + left.subdivisions + right.subdivisions};
}

}  // namespace tsallis::oracle
