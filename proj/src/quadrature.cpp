#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fdcell/error.hpp"
#include "fdcell/specfun.hpp"

namespace fdcell {

void QuadratureSpec::validate() const {
    if (!(relative_tolerance > 0.0)) throw DomainError("QuadratureSpec: relative_tolerance must be positive");
    if (!(absolute_tolerance >= 0.0)) throw DomainError("QuadratureSpec: absolute_tolerance must be nonnegative");
    if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be at least 1");
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
    QuadratureSpec out = *this;
    out.relative_tolerance = std::max(relative_tolerance / factor, 1e-12);
    out.absolute_tolerance = absolute_tolerance / factor;
    return out;
}

namespace detail {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double a, b;
    double value, error, abs_value;
    bool refinable;
};

bool operator<(const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; }

template <class G>
Panel rule15(const G& g, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = g(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double abs_sum = std::abs(kronrod);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = g(center - dx);
        const double f2 = g(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    Panel p{a, b, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half), true};
    const double width_floor = 100.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    p.refinable = std::abs(b - a) > std::max(width_floor, std::numeric_limits<double>::min() * 1e3);
    return p;
}

}  // namespace

QuadratureResult integrate_adaptive(IntegrandRef f, Interval domain, const QuadratureSpec& spec,
                                    int initial_panels) {
    spec.validate();
    if (initial_panels < 1) throw DomainError("integrate: initial_panels must be at least 1");
    if (std::isnan(domain.lower) || std::isnan(domain.upper) || std::isinf(domain.lower))
        throw DomainError("integrate: invalid domain");
    if (domain.upper == domain.lower) return {};
    if (domain.upper < domain.lower) {
        Interval flipped{domain.upper, domain.lower, domain.scale};
        auto r = integrate_adaptive(f, flipped, spec, initial_panels);
        r.value = -r.value;
        return r;
    }

    int evaluations = 0;
    double a = domain.lower, b = domain.upper;
    const bool mapped = domain.is_semi_infinite();
    if (mapped && !spec.semi_infinite_transform)
        throw DomainError("integrate: semi-infinite domain with semi_infinite_transform disabled");
    if (mapped && !(domain.scale > 0.0)) throw DomainError("integrate: semi-infinite scale must be positive");
    const double lower = domain.lower;
    const double scale = domain.scale;

    auto g = [&](double t) {
        ++evaluations;
        double value;
        if (mapped) {
            const double one_minus = 1.0 - t;
            const double x = lower + scale * t / one_minus;
            if (std::isinf(x)) return 0.0;
            const double fx = f(x);
            if (fx == 0.0) return 0.0;
            value = fx * scale / (one_minus * one_minus);
        } else {
            value = f(t);
        }
        if (!std::isfinite(value)) {
            throw DomainError("integrate: integrand is not finite at " + std::to_string(t));
        }
        return value;
    };
    if (mapped) { a = 0.0; b = 1.0; }

    std::vector<Panel> heap;
    heap.reserve(static_cast<std::size_t>(initial_panels + spec.max_subdivisions + 1));
    const double step = (b - a) / initial_panels;
    for (int i = 0; i < initial_panels; ++i) {
        const double lo = a + step * i;
        const double hi = (i + 1 == initial_panels) ? b : a + step * (i + 1);
        heap.push_back(rule15(g, lo, hi));
    }
    std::make_heap(heap.begin(), heap.end());
    std::vector<Panel> frozen;

    auto totals = [&](double& value, double& error, double& abs_value) {
        value = error = abs_value = 0.0;
        for (const auto& p : heap) { value += p.value; error += p.error; abs_value += p.abs_value; }
        for (const auto& p : frozen) { value += p.value; error += p.error; abs_value += p.abs_value; }
    };

    int subdivisions = 0;
    double value = 0.0, error = 0.0, abs_value = 0.0;
    for (;;) {
        totals(value, error, abs_value);
        const double target = std::max({spec.absolute_tolerance, spec.relative_tolerance * std::abs(value),
                                        50.0 * std::numeric_limits<double>::epsilon() * abs_value});
        if (error <= target) break;
        if (heap.empty()) {
            throw QuadratureError("integrate: round-off limits accuracy; estimate " + std::to_string(value) +
                                      " error " + std::to_string(error),
                                  value, error);
        }
        if (subdivisions >= spec.max_subdivisions) {
            throw QuadratureError("integrate: no convergence after " + std::to_string(subdivisions) +
                                      " subdivisions; estimate " + std::to_string(value) + " error " +
                                      std::to_string(error),
                                  value, error);
        }
        std::pop_heap(heap.begin(), heap.end());
        const Panel worst = heap.back();
        heap.pop_back();
        if (!worst.refinable) {
            frozen.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        heap.push_back(rule15(g, worst.a, mid));
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(rule15(g, mid, worst.b));
        std::push_heap(heap.begin(), heap.end());
        ++subdivisions;
    }
    return {value, error, subdivisions, evaluations};
}

}  // namespace detail

}  // namespace fdcell
