#include "fdcell/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fdcell/error.hpp"

namespace fdcell {

namespace {

constexpr double kSeriesEps = 1e-16;
constexpr int kMaxTerms = 2000;

// sum_n b/(b+n) (-x)^n, |x| <= 0.5
double direct_series(double b, double x) {
    double sum = 1.0;
    double power = 1.0;
    for (int n = 1; n < kMaxTerms; ++n) {
        power *= -x;
        const double term = b / (b + n) * power;
        sum += term;
        if (std::abs(term) < kSeriesEps * std::abs(sum)) break;
    }
    return sum;
}

// Pfaff: 2F1(1,b;b+1;-x) = (1+x)^-1 2F1(1,1;b+1;w), w = x/(1+x).
// Terms of the second series are n!/(b+1)_n w^n.
double pfaff_series(double b, double x) {
    const double w = x / (1.0 + x);
    double sum = 1.0;
    double term = 1.0;
    for (int n = 1; n < kMaxTerms; ++n) {
        term *= w * n / (b + n);
        sum += term;
        if (term < kSeriesEps * sum) break;
    }
    return sum / (1.0 + x);
}

// Connection formula for large x:
// 2F1(1,b;b+1;-x) = pi b / sin(pi b) x^-b - b/x sum_n (-1/x)^n / (n + 1 - b)
double inversion_series(double b, double x) {
    const double leading = std::numbers::pi * b / std::sin(std::numbers::pi * b) * std::pow(x, -b);
    const double y = -1.0 / x;
    double sum = 0.0;
    double power = 1.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        const double term = power / (n + 1.0 - b);
        sum += term;
        if (std::abs(term) < kSeriesEps * std::abs(sum)) break;
        power *= y;
    }
    return leading - b / x * sum;
}

}  // namespace

double hyp2f1_special(double eta, double x) {
    if (!(eta > 2.0)) throw DomainError("hyp2f1_special: path-loss exponent must exceed 2, got " + std::to_string(eta));
    if (!(x >= 0.0)) throw DomainError("hyp2f1_special: argument must be nonnegative");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double b = 1.0 - 2.0 / eta;
    if (x <= 0.5) return direct_series(b, x);
    if (x <= 2.0) return pfaff_series(b, x);
    return inversion_series(b, x);
}

double lower_gamma2(double x) {
    if (!(x >= 0.0)) throw DomainError("lower_gamma2: argument must be nonnegative");
    if (x < 1e-3) {
        // 1 - e^-x (1+x) = x^2/2 - x^3/3 + x^4/8 - x^5/30 + ...
        const double x2 = x * x;
        return x2 * (0.5 - x / 3.0 + x2 / 8.0 - x2 * x / 30.0);
    }
    return -std::expm1(-x) - x * std::exp(-x);
}

double u_func(double x) {
    if (!(x >= 0.0)) throw DomainError("u_func: argument must be nonnegative");
    const double r = std::sqrt(x);
    return r * std::atan(r);
}

double erfc(double x) { return std::erfc(x); }

double erfcx(double x) {
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    // Asymptotic expansion 1/(x sqrt(pi)) sum (-1)^k (2k-1)!! / (2x^2)^k.
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 12; ++k) {
        term *= -(2.0 * k - 1.0) * inv2x2;
        sum += term;
    }
    return sum / (x * std::sqrt(std::numbers::pi));
}

}  // namespace fdcell
