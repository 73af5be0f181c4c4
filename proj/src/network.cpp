#include <cmath>
#include <numbers>

#include "fdcell/analytic.hpp"
#include "fdcell/error.hpp"

namespace fdcell {

void NetworkParams::validate() const {
    if (!(lambda > 0.0 && std::isfinite(lambda))) throw DomainError("NetworkParams: lambda must be positive");
    if (!(eta > 2.0 && std::isfinite(eta))) throw DomainError("NetworkParams: eta must exceed 2");
    if (!(rho > 0.0 && std::isfinite(rho))) throw DomainError("NetworkParams: rho must be positive");
    if (!(P_d > 0.0 && std::isfinite(P_d))) throw DomainError("NetworkParams: P_d must be positive");
    if (!(P_u_max > 0.0)) throw DomainError("NetworkParams: P_u_max must be positive");
    if (!(beta >= 0.0 && std::isfinite(beta))) throw DomainError("NetworkParams: beta must be nonnegative");
    if (!(N_o >= 0.0 && std::isfinite(N_o))) throw DomainError("NetworkParams: N_o must be nonnegative");
    for (double w : {omega1_u, omega2_u, omega1_d, omega2_d})
        if (!(w > 0.0 && std::isfinite(w))) throw DomainError("NetworkParams: modulation weights must be positive");
}

double NetworkParams::R_M() const { return std::pow(P_u_max / rho, 1.0 / eta); }

bool NetworkParams::eta_is_four() const { return std::abs(eta - 4.0) <= 1e-12; }

void LinkContext::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("LinkContext: alpha must be in [0, 1]");
    if (!(eff_cross >= 0.0 && std::isfinite(eff_cross))) throw DomainError("LinkContext: eff_cross must be nonnegative");
    if (!(opposite_eff_cross >= 0.0)) throw DomainError("LinkContext: opposite_eff_cross must be nonnegative");
    if (!(bandwidth_hz > 0.0)) throw DomainError("LinkContext: bandwidth must be positive");
}

LinkContext make_link_context(Direction d, const DuplexConfig& cfg, const CrossFactors& factors, UserClass user_class) {
    LinkContext ctx;
    ctx.direction = d;
    ctx.user_class = user_class;
    ctx.alpha = cfg.alpha;
    ctx.eff_cross = factors.eff_cross(d);
    ctx.opposite_eff_cross = factors.eff_cross(opposite(d));
    ctx.bandwidth_hz = cfg.band_width(d);
    return ctx;
}

PowerDensity pu_density(double x, const NetworkParams& p) {
    p.validate();
    if (!(x > 0.0 && x <= p.P_u_max)) throw DomainError("pu_density: x must lie in (0, P_u_max]");
    const double pl = std::numbers::pi * p.lambda;
    PowerDensity out;
    out.point_mass = std::isinf(p.P_u_max) ? 0.0 : std::exp(-pl * std::pow(p.P_u_max / p.rho, 2.0 / p.eta));
    if (x < p.P_u_max) {
        out.density = 2.0 * pl / (p.eta * std::pow(p.rho, 2.0 / p.eta)) * std::pow(x, 2.0 / p.eta - 1.0) *
                      std::exp(-pl * std::pow(x / p.rho, 2.0 / p.eta));
    }
    return out;
}

double pu_frac_moment(const NetworkParams& p) {
    p.validate();
    const double pl = std::numbers::pi * p.lambda;
    const double scale = std::pow(p.rho, 2.0 / p.eta) / pl;
    if (std::isinf(p.P_u_max)) return scale;
    const double u_max = pl * std::pow(p.P_u_max / p.rho, 2.0 / p.eta);
    return scale * lower_gamma2(u_max) + std::pow(p.P_u_max, 2.0 / p.eta) * std::exp(-u_max);
}

std::pair<double, double> class_probabilities(const NetworkParams& p) {
    p.validate();
    const double R = p.R_M();
    const double ceu = std::isinf(R) ? 0.0 : std::exp(-std::numbers::pi * p.lambda * R * R);
    return {-std::expm1(-std::numbers::pi * p.lambda * R * R), ceu};
}

double service_distance_pdf(UserClass c, double r, const NetworkParams& p) {
    p.validate();
    const double pl = std::numbers::pi * p.lambda;
    const double R = p.R_M();
    switch (c) {
        case UserClass::CellCenter:
            if (!(r >= 0.0 && r <= R)) throw DomainError("service_distance_pdf: CCU distance must lie in [0, R_M]");
            return 2.0 * pl * r * std::exp(-pl * r * r) / -std::expm1(-pl * R * R);
        case UserClass::CellEdge:
            if (!(r > R) || std::isinf(r)) throw DomainError("service_distance_pdf: CEU distance must exceed R_M");
            return 2.0 * pl * r * std::exp(-pl * (r - R) * (r + R));
        case UserClass::Mixture:
            if (!(r >= 0.0) || std::isinf(r)) throw DomainError("service_distance_pdf: distance must be nonnegative");
            return 2.0 * pl * r * std::exp(-pl * r * r);
    }
    return 0.0;
}

}  // namespace fdcell
