#include <cmath>
#include <numbers>
#include <string>

#include "fdcell/analytic.hpp"
#include "fdcell/error.hpp"

namespace fdcell {

namespace {

constexpr double kPi = std::numbers::pi;

double general_exponent(LTKind kind, double s, const NetworkParams& p, double r_o, const QuadratureSpec& spec) {
    const double eta = p.eta;
    const double pl = kPi * p.lambda;
    const double csc = 1.0 / std::sin(2.0 * kPi / eta);
    switch (kind) {
        case LTKind::uu_ccu:
        case LTKind::ud_ccu:
            return 2.0 * pl / (eta - 2.0) * s * std::pow(p.rho, 1.0 - 2.0 / eta) * pu_frac_moment(p) *
                   hyp2f1_special(eta, s * p.rho);
        case LTKind::du_shared:
            return 2.0 / eta * kPi * pl * std::pow(s * p.P_d, 2.0 / eta) * csc;
        case LTKind::ud_ceu:
            return 2.0 / eta * kPi * pl * csc * std::pow(s, 2.0 / eta) * pu_frac_moment(p);
        case LTKind::dd_shared:
            return 2.0 * pl * std::pow(r_o, 2.0 - eta) * s * p.P_d / (eta - 2.0) *
                   hyp2f1_special(eta, s * p.P_d * std::pow(r_o, -eta));
        case LTKind::uu_ceu: {
            const double r_pow = std::pow(r_o, -eta);
            auto g = [&](double P) { return s * P * hyp2f1_special(eta, s * r_pow * P); };
            return 2.0 * pl / (eta - 2.0) * std::pow(r_o, 2.0 - eta) * pu_expectation(g, p, spec);
        }
    }
    return 0.0;
}

double closed_exponent(LTKind kind, double s, const NetworkParams& p, double r_o, const QuadratureSpec& spec) {
    const double pl = kPi * p.lambda;
    switch (kind) {
        case LTKind::uu_ccu:
        case LTKind::ud_ccu:
            return pl * std::sqrt(s) * pu_frac_moment(p) * std::atan(std::sqrt(s * p.rho));
        case LTKind::du_shared:
            return kPi / 2 * pl * std::sqrt(s * p.P_d);
        case LTKind::ud_ceu:
            return kPi / 2 * pl * std::sqrt(s) * pu_frac_moment(p);
        case LTKind::dd_shared: {
            const double q = std::sqrt(s * p.P_d);
            return pl * q * std::atan(q / (r_o * r_o));
        }
        case LTKind::uu_ceu: {
            const double r2 = r_o * r_o;
            auto g = [&](double P) {
                const double q = std::sqrt(s * P);
                return q * std::atan(q / r2);
            };
            return pl * pu_expectation(g, p, spec);
        }
    }
    return 0.0;
}

}  // namespace

std::string_view to_string(LTKind k) {
    switch (k) {
        case LTKind::uu_ccu: return "uu_ccu";
        case LTKind::du_shared: return "du_shared";
        case LTKind::uu_ceu: return "uu_ceu";
        case LTKind::dd_shared: return "dd_shared";
        case LTKind::ud_ccu: return "ud_ccu";
        case LTKind::ud_ceu: return "ud_ceu";
    }
    return "?";
}

bool needs_distance(LTKind k) { return k == LTKind::uu_ceu || k == LTKind::dd_shared; }

double lt_interference(LTKind kind, double s, const NetworkParams& p, std::optional<double> r_o,
                       const QuadratureSpec& spec, LtPath path) {
    double r = 0.0;
    if (needs_distance(kind)) {
        if (!r_o) throw DomainError("lt_interference: " + std::string(to_string(kind)) + " requires r_o");
        r = *r_o;
        if (!(r > 0.0)) throw DomainError("lt_interference: r_o must be positive");
    }
    if (!(s >= 0.0)) throw DomainError("lt_interference: s must be nonnegative");
    if (s == 0.0) return 1.0;
    if (std::isinf(s)) return 0.0;
    if (std::isinf(r)) return 1.0;
    if (path == LtPath::Auto) path = p.eta_is_four() ? LtPath::ClosedForm : LtPath::General;
    if (path == LtPath::ClosedForm && !p.eta_is_four())
        throw DomainError("lt_interference: arctan closed forms need eta = 4");
    const double exponent =
        path == LtPath::ClosedForm ? closed_exponent(kind, s, p, r, spec) : general_exponent(kind, s, p, r, spec);
    return std::exp(-exponent);
}

double lt_uu_ceu_jensen(double s, const NetworkParams& p, double r_o) {
    p.validate();
    if (!p.eta_is_four()) throw DomainError("lt_uu_ceu_jensen: the bound is stated for eta = 4");
    if (!(s >= 0.0)) throw DomainError("lt_uu_ceu_jensen: s must be nonnegative");
    if (!(r_o > 0.0)) throw DomainError("lt_uu_ceu_jensen: r_o must be positive");
    if (s == 0.0 || std::isinf(r_o)) return 1.0;
    const double m = pu_frac_moment(p);
    return std::exp(-kPi * p.lambda * std::sqrt(s) * m * std::atan(m * std::sqrt(s) / (r_o * r_o)));
}

}  // namespace fdcell
