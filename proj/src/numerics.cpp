#include "tsallis/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "tsallis/errors.hpp"

namespace tsallis::numerics {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kHalfLog2Pi = 0.91893853320467274178;

constexpr int kIncGammaMaxIter = 500;
constexpr double kIncGammaEps = 1e-14;
constexpr int kQuantileMaxIter = 200;

// zeta(j) - 1 for j = 2..kZetaTerms+1, summed directly up to N and closed
// with the Euler-Maclaurin tail. Only needed once.
constexpr int kZetaTerms = 48;

std::array<double, kZetaTerms> make_zeta_minus_one() {
    std::array<double, kZetaTerms> out{};
    constexpr int N = 100;
    for (int idx = 0; idx < kZetaTerms; ++idx) {
        const double s = idx + 2;
        double sum = 0.0;
        // Small terms first.
        for (int j = N - 1; j >= 2; --j) sum += std::pow(static_cast<double>(j), -s);
        const double nn = N;
        const double tail = std::pow(nn, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(nn, -s) +
                            s / 12.0 * std::pow(nn, -s - 1.0) -
                            s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(nn, -s - 3.0) +
                            s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 *
                                std::pow(nn, -s - 5.0);
        out[idx] = sum + tail;
    }
    return out;
}

const std::array<double, kZetaTerms>& zeta_minus_one() {
    static const auto table = make_zeta_minus_one();
    return table;
}

// ln Γ(2 + z) for |z| <= 0.5 from the Taylor series
//   ln Γ(2+z) = (1-γ) z + Σ_{j>=2} (-1)^j (ζ(j)-1) z^j / j,
// which keeps full relative accuracy near the root at z = 0.
double ln_gamma_2pz(double z) {
    const auto& zm1 = zeta_minus_one();
    double term_pow = -z;  // (-z)^j after the first multiply
    double sum = (1.0 - kEulerGamma) * z;
    for (int idx = 0; idx < kZetaTerms; ++idx) {
        const int j = idx + 2;
        term_pow *= -z;
        const double term = term_pow * zm1[idx] / j;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double ln_gamma_stirling(double x) {
    // Bernoulli corrections B_{2j} / (2j (2j-1) x^{2j-1}).
    static constexpr std::array<double, 8> kCoef = {
        1.0 / 12.0,        -1.0 / 360.0,        1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0,      -691.0 / 360360.0,   1.0 / 156.0,  -3617.0 / 122400.0,
    };
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = 0.0;
    for (auto it = kCoef.rbegin(); it != kCoef.rend(); ++it) series = series * inv2 + *it;
    series *= inv;
    return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + series;
}

double digamma_asymptotic(double x) {
    const double inv2 = 1.0 / (x * x);
    const double series =
        inv2 * (1.0 / 12.0 -
                inv2 * (1.0 / 120.0 -
                        inv2 * (1.0 / 252.0 -
                                inv2 * (1.0 / 240.0 -
                                        inv2 * (1.0 / 132.0 -
                                                inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    return std::log(x) - 0.5 / x - series;
}

// ln of the prefactor x^a e^{-x} / Γ(a) shared by both incomplete-gamma branches.
double log_inc_gamma_prefactor(double a, double x) {
    return a * std::log(x) - x - ln_gamma(a);
}

// γ(a,x)/Γ(a) by the power series; valid for x < a + 1.
double inc_gamma_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < kIncGammaMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kIncGammaEps) {
            return sum * std::exp(log_inc_gamma_prefactor(a, x));
        }
    }
    throw ConvergenceError("incomplete gamma series did not converge for a=" + std::to_string(a) +
                           ", x=" + std::to_string(x));
}

// Γ(a,x)/Γ(a) by the Lentz continued fraction; valid for x >= a + 1.
double inc_gamma_continued_fraction(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kIncGammaEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kIncGammaMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kIncGammaEps) {
            return std::exp(log_inc_gamma_prefactor(a, x)) * h;
        }
    }
    throw ConvergenceError("incomplete gamma continued fraction did not converge for a=" +
                           std::to_string(a) + ", x=" + std::to_string(x));
}

void check_x(double x) {
    if (!(x >= 0.0) || std::isnan(x)) {
        throw DomainError("incomplete gamma requires x >= 0, got " + std::to_string(x));
    }
}

}  // namespace

PositiveReal::PositiveReal(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError("expected a finite positive real, got " + std::to_string(value));
    }
}

double ln_gamma(PositiveReal xp) {
    const double x = xp;
    if (x == 1.0 || x == 2.0) return 0.0;
    if (x < 0.5) {
        // Γ(x) = Γ(x+1)/x; x+1 lands in [1, 1.5).
        return ln_gamma_2pz(x) - std::log1p(x) - std::log(x);
    }
    if (x < 1.5) return ln_gamma_2pz(x - 1.0) - std::log1p(x - 1.0);
    if (x < 2.5) return ln_gamma_2pz(x - 2.0);
    if (x < 15.0) {
        // Recurse down into [1.5, 2.5): ln Γ(x) = ln Γ(x-m) + Σ ln(x-j).
        double y = x;
        double prod = 1.0;
        while (y >= 2.5) {
            y -= 1.0;
            prod *= y;
        }
        return ln_gamma_2pz(y - 2.0) + std::log(prod);
    }
    return ln_gamma_stirling(x);
}

double digamma(PositiveReal xp) {
    double x = xp;
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    return digamma_asymptotic(x) + shift;
}

double reg_lower_inc_gamma(PositiveReal a, double x) {
    check_x(x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return inc_gamma_series(a, x);
    return 1.0 - inc_gamma_continued_fraction(a, x);
}

double reg_upper_inc_gamma(PositiveReal a, double x) {
    check_x(x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - inc_gamma_series(a, x);
    return inc_gamma_continued_fraction(a, x);
}

double chi_square_quantile(PositiveReal dof, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("chi-square quantile requires 0 < p < 1, got " + std::to_string(p));
    }
    const double a = 0.5 * dof;
    // Solve in y = x/2 against whichever tail is smaller, so p near 1 keeps
    // its digits.
    const bool lower = p <= 0.5;
    const double target = lower ? p : 1.0 - p;
    auto residual = [&](double y) {
        return lower ? reg_lower_inc_gamma(a, y) - target : target - reg_upper_inc_gamma(a, y);
    };
    const double log_norm = ln_gamma(a);
    auto density = [&](double y) { return std::exp((a - 1.0) * std::log(y) - y - log_norm); };

    double lo = 0.0;
    double hi = std::max(1.0, a);
    while (residual(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw ConvergenceError("chi-square quantile bracket overflow");
    }

    double y = 0.5 * (lo + hi);
    for (int it = 0; it < kQuantileMaxIter; ++it) {
        const double r = residual(y);
        if (r == 0.0) return 2.0 * y;
        if (r < 0.0) {
            lo = y;
        } else {
            hi = y;
        }
        const double f = density(y);
        double next = (f > 0.0 && std::isfinite(f)) ? y - r / f : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - y) <= 1e-15 * next || hi - lo <= 1e-15 * hi) return 2.0 * next;
        y = next;
    }
    throw ConvergenceError("chi-square quantile did not converge for dof=" +
                           std::to_string(static_cast<double>(dof)) + ", p=" + std::to_string(p));
}

double log_gamma_ratio(PositiveReal a, PositiveReal b) {
    if (static_cast<double>(a) == static_cast<double>(b)) return 0.0;
    return ln_gamma(a) - ln_gamma(b);
}

}  // namespace tsallis::numerics
