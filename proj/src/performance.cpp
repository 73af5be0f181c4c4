#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fdcell/analytic.hpp"
#include "fdcell/error.hpp"

namespace fdcell {

namespace {

constexpr double kPi = std::numbers::pi;

void require_eta4(const NetworkParams& p, const char* who) {
    if (!p.eta_is_four()) throw DomainError(std::string(who) + ": requires eta = 4");
}

// Mixture weight times the class-conditional mean of P{SINR > x}.
double mean_success(double x, const LinkContext& ctx, const NetworkParams& p, const QuadratureSpec& spec) {
    const QuadratureSpec inner = spec.tightened(100.0);
    const double pl = kPi * p.lambda;
    const double R = p.R_M();
    const auto [p_ccu, p_ceu] = class_probabilities(p);
    const double spread = 1.0 / std::sqrt(pl);
    auto rayleigh = [&](double r) { return 2.0 * pl * r * std::exp(-pl * r * r); };

    double ccu = 0.0, ceu = 0.0;
    const bool want_ccu = ctx.user_class != UserClass::CellEdge && p_ccu > 0.0;
    const bool want_ceu = ctx.user_class != UserClass::CellCenter && p_ceu > 0.0;
    const Direction d = ctx.direction;

    if (want_ccu) {
        if (d == Direction::Uplink) {
            ccu = p_ccu * success_probability(d, UserClass::CellCenter, x, 0.0, ctx, p, inner);
        } else {
            auto f = [&](double r) {
                if (r <= 0.0) return 0.0;
                return rayleigh(r) * success_probability(d, UserClass::CellCenter, x, r, ctx, p, inner);
            };
            ccu = std::isinf(R) ? integrate(f, Interval::ray(0.0, spread), spec)
                                : integrate(f, Interval::finite(0.0, R), spec);
        }
    }
    if (want_ceu) {
        auto f = [&](double r) {
            return rayleigh(r) * success_probability(d, UserClass::CellEdge, x, r, ctx, p, inner);
        };
        ceu = integrate(f, Interval::ray(R, spread), spec);
    }
    switch (ctx.user_class) {
        case UserClass::CellCenter: return p_ccu > 0.0 ? ccu / p_ccu : 0.0;
        case UserClass::CellEdge: return p_ceu > 0.0 ? ceu / p_ceu : 0.0;
        case UserClass::Mixture: break;
    }
    return ccu + ceu;
}

double outage_for_model(double theta, const LinkContext& ctx, const NetworkParams& p, const QuadratureSpec& spec,
                        RateModel model) {
    switch (model) {
        case RateModel::General: return outage(theta, ctx, p, spec);
        case RateModel::Special: return outage_special(theta, ctx, p, SpecialForm::Exact, spec);
        case RateModel::SpecialErfcApprox:
            return outage_special(theta, ctx, p,
                                  ctx.direction == Direction::Downlink ? SpecialForm::ErfcApprox : SpecialForm::Exact,
                                  spec);
    }
    return 0.0;
}

double eq35_outage(double theta, double c, const NetworkParams& p) {
    const double u1 = 1.0 + u_func(theta);
    const double a = std::sqrt(c * theta * p.rho / p.P_d);
    if (a == 0.0) return 1.0 - 1.0 / u1;
    const double b = kPi * p.lambda * u1;
    return 1.0 - std::pow(kPi, 1.5) * p.lambda * erfcx(b / (2.0 * a)) / (2.0 * a);
}

}  // namespace

double success_probability(Direction d, UserClass c, double x, double r, const LinkContext& ctx,
                           const NetworkParams& p, const QuadratureSpec& spec) {
    if (!(x >= 0.0)) throw DomainError("success_probability: threshold must be nonnegative");
    if (c == UserClass::Mixture) throw DomainError("success_probability: needs a single user class");
    const double cross = ctx.eff_cross;
    const double eta = p.eta;
    if (d == Direction::Uplink) {
        if (c == UserClass::CellCenter) {
            const double s = x / p.rho;
            return lt_interference(LTKind::uu_ccu, s, p, {}, spec) *
                   lt_interference(LTKind::du_shared, s * cross, p, {}, spec) *
                   std::exp(-s * (p.beta * p.P_d * cross + p.N_o));
        }
        const double si_cross = ctx.literal_ceu_si_factor ? ctx.opposite_eff_cross : cross;
        const double s = x * std::pow(r, eta) / p.P_u_max;
        return lt_interference(LTKind::uu_ceu, s, p, r, spec) *
               lt_interference(LTKind::du_shared, s * cross, p, {}, spec) *
               std::exp(-s * (p.beta * p.P_d * si_cross + p.N_o));
    }
    const double r_eta = std::pow(r, eta);
    const double s = x * r_eta / p.P_d;
    if (s == 0.0) return 1.0;
    if (c == UserClass::CellCenter) {
        return lt_interference(LTKind::dd_shared, s, p, r, spec) *
               lt_interference(LTKind::ud_ccu, s * cross, p, {}, spec) *
               std::exp(-s * (p.beta * p.rho * r_eta * cross + p.N_o));
    }
    return lt_interference(LTKind::dd_shared, s, p, r, spec) *
           lt_interference(LTKind::ud_ceu, s * cross, p, {}, spec) *
           std::exp(-s * (p.beta * p.P_u_max * cross + p.N_o));
}

double outage(double theta, const LinkContext& ctx, const NetworkParams& p, const QuadratureSpec& spec) {
    p.validate();
    ctx.validate();
    spec.validate();
    if (!(theta > 0.0)) throw DomainError("outage: theta must be positive");
    if (std::isinf(theta)) return 1.0;
    const double value = 1.0 - mean_success(theta, ctx, p, spec);
    return std::clamp(value, 0.0, 1.0);
}

double bep(const LinkContext& ctx, const NetworkParams& p, const QuadratureSpec& spec) {
    p.validate();
    ctx.validate();
    spec.validate();
    const double w1 = p.omega1(ctx.direction);
    const double w2 = p.omega2(ctx.direction);
    auto f = [&](double t) {
        const double t2 = t * t;
        return std::exp(-t2) * mean_success(t2 / w2, ctx, p, spec);
    };
    const double tail = integrate(f, Interval::ray(0.0, 1.0), spec);
    return std::clamp(w1 * (1.0 - 2.0 / std::sqrt(kPi) * tail), 0.0, w1);
}

double outage_special(double theta, const LinkContext& ctx, const NetworkParams& p, SpecialForm form,
                      const QuadratureSpec& spec) {
    p.validate();
    ctx.validate();
    require_eta4(p, "outage_special");
    if (!(theta > 0.0)) throw DomainError("outage_special: theta must be positive");
    const double c = ctx.eff_cross;
    if (ctx.direction == Direction::Uplink) {
        const double exponent = u_func(theta) + kPi * kPi / 2 * p.lambda * std::sqrt(theta * p.P_d / p.rho) * std::sqrt(c) +
                                theta * p.beta * p.P_d * c / p.rho;
        return -std::expm1(-exponent);
    }
    if (form == SpecialForm::ErfcApprox) {
        if (p.beta != 0.0) throw DomainError("outage_special: the erfc closed form assumes beta = 0");
        return eq35_outage(theta, c, p);
    }
    const double pl = kPi * p.lambda;
    const double u1 = 1.0 + u_func(theta);
    auto f = [&](double r) {
        const double r2 = r * r;
        const double r4 = r2 * r2;
        return 2.0 * pl * r *
               std::exp(-pl * r2 * u1 - u_func(p.rho * theta * r4 * c / p.P_d) -
                        theta * p.beta * p.rho * c * r4 * r4 / p.P_d);
    };
    const double covered = integrate(f, Interval::ray(0.0, 1.0 / std::sqrt(pl * u1)), spec);
    return std::clamp(1.0 - covered, 0.0, 1.0);
}

double rate(RateKind kind, double theta, const LinkContext& ctx, const NetworkParams& p, const QuadratureSpec& spec,
            RateModel model) {
    p.validate();
    ctx.validate();
    const double bw = ctx.bandwidth_hz;
    if (kind == RateKind::Effective) {
        if (!(theta > 0.0)) throw DomainError("rate: effective rate needs theta > 0");
        return bw * std::log2(1.0 + theta) * (1.0 - outage_for_model(theta, ctx, p, spec, model));
    }
    // Integrate in v = ln(1+g): dg/(1+g) = dv and the integrand decays exponentially in v.
    const QuadratureSpec inner = spec.tightened(100.0);
    auto f = [&](double v) {
        const double g = std::expm1(v);
        if (g <= 0.0) return 1.0;
        if (std::isinf(g)) return 0.0;
        return 1.0 - outage_for_model(g, ctx, p, inner, model);
    };
    return bw / std::numbers::ln2 * integrate(f, Interval::ray(0.0, 2.0), spec);
}

GainCondition ul_gain_condition(double alpha, double theta, double eff_cross_u_alpha, double eff_cross_u_zero,
                                const NetworkParams& p) {
    p.validate();
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("ul_gain_condition: alpha must be in [0, 1]");
    if (!(theta > 0.0)) throw DomainError("ul_gain_condition: theta must be positive");
    GainCondition out;
    out.lhs = std::sqrt(p.rho / p.P_d);
    if (alpha == 0.0) {
        out.degenerate = true;
        out.rhs = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.rhs = kPi * kPi * p.lambda * theta / (2.0 * std::log1p(alpha)) *
              (std::sqrt(eff_cross_u_alpha) - std::sqrt(eff_cross_u_zero));
    out.satisfied = out.lhs > out.rhs;
    return out;
}

double dl_gain(double theta, const DuplexConfig& cfg, double eff_cross_d_alpha, double eff_cross_d_zero,
               const NetworkParams& p) {
    p.validate();
    cfg.validate();
    require_eta4(p, "dl_gain");
    if (!(theta > 0.0)) throw DomainError("dl_gain: theta must be positive");
    const double bw_ratio = cfg.band_width(Direction::Downlink) / cfg.with_alpha(0.0).band_width(Direction::Downlink);
    const double cover_alpha = 1.0 - eq35_outage(theta, eff_cross_d_alpha, p);
    const double cover_zero = 1.0 - eq35_outage(theta, eff_cross_d_zero, p);
    return bw_ratio * cover_alpha / cover_zero;
}

}  // namespace fdcell
