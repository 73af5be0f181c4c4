#include "fdcell/pulse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "fdcell/error.hpp"

namespace fdcell {

namespace {

double sinc(double x) {
    const double px = std::numbers::pi * x;
    if (std::abs(px) < 1e-6) return 1.0 - px * px / 6.0;
    return std::sin(px) / px;
}

// Points where S(.; W) or its derivative is discontinuous.
void append_kinks(const PulseShape& s, double W, double shift, std::vector<double>& out) {
    switch (s.kind) {
        case PulseShape::Kind::Rect:
            out.push_back(shift - W / 2);
            out.push_back(shift + W / 2);
            break;
        case PulseShape::Kind::RRC: {
            const double T = (1.0 + s.rolloff) / W;
            const double knee = (1.0 - s.rolloff) / (2.0 * T);
            out.insert(out.end(), {shift - W / 2, shift - knee, shift + knee, shift + W / 2});
            break;
        }
        case PulseShape::Kind::Sinc:
        case PulseShape::Kind::SincSq:
            break;
    }
}

template <class F>
double integrate_piecewise(const F& f, double lo, double hi, std::vector<double> kinks, const QuadratureSpec& spec) {
    kinks.push_back(lo);
    kinks.push_back(hi);
    std::sort(kinks.begin(), kinks.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < kinks.size(); ++i) {
        const double a = std::max(kinks[i], lo);
        const double b = std::min(kinks[i + 1], hi);
        if (b > a) sum += integrate(f, Interval::finite(a, b), spec);
    }
    return sum;
}

double intra_factor(const PulseShape& s, double W, const QuadratureSpec& spec) {
    switch (s.kind) {
        case PulseShape::Kind::Rect:
        case PulseShape::Kind::RRC:
            return 1.0;
        default:
            break;
    }
    auto f = [&](double x) {
        const double v = spectrum_value(s, W, x);
        return v * v;
    };
    return 2.0 * integrate(f, Interval::finite(0.0, W / 2), spec);
}

}  // namespace

void PulseShape::validate() const {
    if (kind == Kind::RRC && !(rolloff > 0.0 && rolloff <= 1.0))
        throw DomainError("PulseShape: RRC roll-off must be in (0, 1]");
}

std::string PulseShape::name() const {
    switch (kind) {
        case Kind::Rect: return "rect";
        case Kind::RRC: {
            char buf[32];
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, rolloff);
            (void)ec;
            return "rrc:" + std::string(buf, end);
        }
        case Kind::Sinc: return "sinc";
        case Kind::SincSq: return "sinc2";
    }
    return "?";
}

PulseShape PulseShape::parse(std::string_view text) {
    std::string t(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "rect") return rect();
    if (t == "sinc") return sinc();
    if (t == "sinc2" || t == "sincsq" || t == "sinc^2") return sinc_sq();
    if (t == "rrc") return rrc();
    if (t.rfind("rrc:", 0) == 0) {
        double r = 0.0;
        const char* first = t.data() + 4;
        const char* last = t.data() + t.size();
        auto [ptr, ec] = std::from_chars(first, last, r);
        if (ec != std::errc() || ptr != last) throw DomainError("PulseShape: bad roll-off in '" + std::string(text) + "'");
        PulseShape s = rrc(r);
        s.validate();
        return s;
    }
    throw DomainError("PulseShape: unknown pulse '" + std::string(text) + "'");
}

double spectrum_value(const PulseShape& shape, double W, double f) {
    if (!(W > 0.0)) throw DomainError("spectrum_value: width must be positive");
    const double af = std::abs(f);
    switch (shape.kind) {
        case PulseShape::Kind::Rect:
            return af <= W / 2 ? 1.0 / std::sqrt(W) : 0.0;
        case PulseShape::Kind::Sinc:
            return std::sqrt(2.0 / W) * sinc(2.0 * f / W);
        case PulseShape::Kind::SincSq: {
            const double s = sinc(2.0 * f / W);
            return std::sqrt(3.0 / W) * s * s;
        }
        case PulseShape::Kind::RRC: {
            const double r = shape.rolloff;
            const double T = (1.0 + r) / W;
            const double knee = (1.0 - r) / (2.0 * T);
            if (af <= knee) return std::sqrt(T);
            if (af > W / 2) return 0.0;
            return std::sqrt(T) * std::cos(std::numbers::pi * T / (2.0 * r) * (af - knee));
        }
    }
    return 0.0;
}

void DuplexConfig::validate() const {
    if (!(B_u > 0.0)) throw DomainError("DuplexConfig: B_u must be positive");
    if (!(B_d > 0.0)) throw DomainError("DuplexConfig: B_d must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("DuplexConfig: alpha must be in [0, 1]");
}

double DuplexConfig::min_bandwidth() const { return std::min(B_u, B_d); }

double DuplexConfig::delta_f() const { return (B_u + B_d) / 2 - alpha * min_bandwidth(); }

double DuplexConfig::band_width(Direction d) const {
    return (d == Direction::Uplink ? B_u : B_d) + alpha * min_bandwidth();
}

double cross_amplitude(Direction d, const PulseShape& s_u, const PulseShape& s_d, const DuplexConfig& cfg,
                       const QuadratureSpec& spec) {
    cfg.validate();
    const PulseShape& self = d == Direction::Uplink ? s_u : s_d;
    const PulseShape& other = d == Direction::Uplink ? s_d : s_u;
    const double W_self = cfg.band_width(d);
    const double W_other = cfg.band_width(opposite(d));
    const double df = cfg.delta_f();
    const double limit = W_other / 2;

    std::vector<double> kinks;
    append_kinks(self, W_self, 0.0, kinks);
    append_kinks(other, W_other, df, kinks);
    auto f = [&](double x) { return spectrum_value(other, W_other, x - df) * spectrum_value(self, W_self, x); };
    return integrate_piecewise(f, -limit, limit, std::move(kinks), spec);
}

CrossFactors overlap_factors(const PulseShape& s_u, const PulseShape& s_d, const DuplexConfig& cfg,
                             const QuadratureSpec& spec) {
    cfg.validate();
    s_u.validate();
    s_d.validate();
    CrossFactors out;
    out.I_u = intra_factor(s_u, cfg.band_width(Direction::Uplink), spec);
    out.I_d = intra_factor(s_d, cfg.band_width(Direction::Downlink), spec);
    out.C_u = cross_amplitude(Direction::Uplink, s_u, s_d, cfg, spec);
    out.C_d = cross_amplitude(Direction::Downlink, s_u, s_d, cfg, spec);
    out.eff_cross_u = (out.C_u / out.I_u) * (out.C_u / out.I_u);
    out.eff_cross_d = (out.C_d / out.I_d) * (out.C_d / out.I_d);
    return out;
}

double find_orthogonal_alpha(const PulseShape& s_u, const PulseShape& s_d, const DuplexConfig& family, double lo,
                             double hi) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) throw DomainError("find_orthogonal_alpha: bracket must satisfy 0 <= lo < hi <= 1");
    auto c = [&](double a) { return cross_amplitude(Direction::Uplink, s_u, s_d, family.with_alpha(a)); };
    auto is_root = [&](double a, double value) {
        const double I = intra_factor(s_u, family.with_alpha(a).band_width(Direction::Uplink), kPulseQuadratureSpec);
        return std::abs(value) < 1e-6 * std::abs(I);
    };

    auto solve = [&](double a, double b, double fa, double fb) {
        boost::uintmax_t iterations = 100;
        auto tol = [](double x, double y) { return std::abs(x - y) < 1e-13; };
        auto [r0, r1] = boost::math::tools::toms748_solve(c, a, b, fa, fb, tol, iterations);
        return 0.5 * (r0 + r1);
    };

    const double f_lo = c(lo);
    if (is_root(lo, f_lo)) return lo;
    const double f_hi = c(hi);
    if (is_root(hi, f_hi)) return hi;
    if ((f_lo < 0) != (f_hi < 0)) return solve(lo, hi, f_lo, f_hi);

    constexpr int kScan = 64;
    double prev_a = lo, prev_f = f_lo;
    double best_a = lo, best_f = std::abs(f_lo);
    for (int i = 1; i <= kScan; ++i) {
        const double a = lo + (hi - lo) * i / kScan;
        const double fa = i == kScan ? f_hi : c(a);
        if (is_root(a, fa)) return a;
        if ((fa < 0) != (prev_f < 0)) return solve(prev_a, a, prev_f, fa);
        if (std::abs(fa) < best_f) { best_f = std::abs(fa); best_a = a; }
        prev_a = a;
        prev_f = fa;
    }
    // A touching zero: refine the smallest |C_u| with a golden-section search.
    double a = std::max(lo, best_a - (hi - lo) / kScan), b = std::min(hi, best_a + (hi - lo) / kScan);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 0; i < 80 && b - a > 1e-12; ++i) {
        const double x1 = b - g * (b - a), x2 = a + g * (b - a);
        if (std::abs(c(x1)) < std::abs(c(x2))) b = x2; else a = x1;
    }
    const double m = 0.5 * (a + b);
    if (is_root(m, c(m))) return m;
    throw NoRootError("find_orthogonal_alpha: C_u keeps one sign on [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
}

double noise_power(Direction d, const DuplexConfig& cfg, double N_o, const CrossFactors& factors) {
    cfg.validate();
    const double I = factors.intra(d);
    return N_o * I * I;
}

}  // namespace fdcell
