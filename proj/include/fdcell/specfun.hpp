#pragma once

#include <limits>
#include <utility>

namespace fdcell {

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// Gauss hypergeometric 2F1(1, 1-2/eta; 2-2/eta; -x), the only member of the
/// 2F1 family that the interference transforms need.
///
/// Evaluated by the direct series for small x, the Pfaff transformation
/// (argument x/(1+x)) in the middle range and the 1/x connection formula for
/// large x, so every branch converges geometrically. Relative accuracy is
/// about 1e-14 over x in [0, 1e300].
///
/// Throws DomainError when eta <= 2 or x < 0.
double hyp2f1_special(double eta, double x);

/// Lower incomplete gamma of order two: 1 - e^-x (1 + x).
double lower_gamma2(double x);

/// U(x) = sqrt(x) * arctan(sqrt(x)).
double u_func(double x);

/// Complementary error function (std::erfc).
double erfc(double x);

/// Scaled complementary error function exp(x^2) erfc(x), finite for large x.
double erfcx(double x);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Numeric contract for an adaptive integral.
struct QuadratureSpec {
    double relative_tolerance = 1e-6;
    double absolute_tolerance = 0.0;
    int max_subdivisions = 2000;
    /// Allow [a, inf) domains through x = a + scale * t / (1 - t).
    bool semi_infinite_transform = true;

    void validate() const;

    /// Same spec with the relative tolerance tightened by `factor`, used for
    /// integrals nested inside another one.
    QuadratureSpec tightened(double factor) const;
};

/// Default contract for improper integrals.
inline constexpr QuadratureSpec kImproperIntegralSpec{1e-6, 0.0, 2000, true};

/// Default contract where an integral feeds a special-function-grade value.
inline constexpr QuadratureSpec kPreciseIntegralSpec{1e-10, 0.0, 4000, true};

/// Integration domain. `upper` may be +infinity; `scale` sets where the
/// semi-infinite map puts the midpoint of [0, 1) (x = lower + scale).
struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    double scale = 1.0;

    static Interval finite(double a, double b) { return {a, b, 1.0}; }
    static Interval ray(double a, double scale = 1.0) {
        return {a, std::numeric_limits<double>::infinity(), scale};
    }
    bool is_semi_infinite() const { return upper == std::numeric_limits<double>::infinity(); }
};

/// Result of an adaptive integral with its error estimate.
struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
    int evaluations = 0;
};

namespace detail {

/// Non-owning reference to a scalar integrand.
class IntegrandRef {
public:
    template <class F>
    IntegrandRef(const F& f)  // NOLINT(google-explicit-constructor)
        : object_(&f), call_([](const void* o, double x) { return (*static_cast<const F*>(o))(x); }) {}

    double operator()(double x) const { return call_(object_, x); }

private:
    const void* object_;
    double (*call_)(const void*, double);
};

QuadratureResult integrate_adaptive(IntegrandRef f, Interval domain, const QuadratureSpec& spec,
                                    int initial_panels);

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration.
///
/// `initial_panels` splits the domain uniformly before adaptation starts.
/// Throws QuadratureError if the tolerance is not met within
/// `spec.max_subdivisions` bisections, and DomainError for malformed domains.
template <class F>
QuadratureResult integrate_detailed(const F& f, Interval domain, const QuadratureSpec& spec = {},
                                    int initial_panels = 1) {
    return detail::integrate_adaptive(detail::IntegrandRef(f), domain, spec, initial_panels);
}

template <class F>
double integrate(const F& f, Interval domain, const QuadratureSpec& spec = {}, int initial_panels = 1) {
    return integrate_detailed(f, domain, spec, initial_panels).value;
}

}  // namespace fdcell
