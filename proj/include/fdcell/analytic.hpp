#pragma once

#include <cmath>
#include <optional>
#include <string_view>
#include <utility>

#include "fdcell/common.hpp"
#include "fdcell/pulse.hpp"
#include "fdcell/specfun.hpp"

namespace fdcell {

/// Which users a metric averages over.
enum class UserClass { CellCenter, CellEdge, Mixture };

/// Network and radio parameters in SI units (m, W, Hz).
struct NetworkParams {
    double lambda = 1e-6;    // BS intensity, BS/m^2
    double rho = 1e-10;      // UL power-control target, W
    double P_d = 5.0;        // BS transmit power, W
    double P_u_max = 1.0;    // UE power cap, W (may be +inf)
    double eta = 4.0;        // path-loss exponent
    double beta = 1e-8;      // residual self-interference, linear
    double N_o = 1e-12;      // noise term, W
    double omega1_u = 0.5;
    double omega2_u = 1.0;
    double omega1_d = 0.5;
    double omega2_d = 1.0;

    /// Default operating point: 1 BS/km^2, rho -70 dBm, P_d 5 W, P_u_max 1 W,
    /// beta -80 dB, N_o -90 dBm, BPSK weights, eta 4.
    static NetworkParams table1() { return {}; }

    void validate() const;
    /// CCU/CEU boundary (P_u_max / rho)^(1/eta).
    double R_M() const;
    bool eta_is_four() const;
    double omega1(Direction d) const { return d == Direction::Uplink ? omega1_u : omega1_d; }
    double omega2(Direction d) const { return d == Direction::Uplink ? omega2_u : omega2_d; }
};

/// What a performance metric is evaluated for.
struct LinkContext {
    Direction direction = Direction::Uplink;
    UserClass user_class = UserClass::Mixture;
    double alpha = 0.0;
    double eff_cross = 0.0;           // |C~_chi(alpha)|^2 at this decoder
    double bandwidth_hz = 1e6;        // BW(alpha) = B_chi + alpha B
    double opposite_eff_cross = 0.0;  // |C~_chibar(alpha)|^2, used only by literal_ceu_si_factor
    /// Use |C~_d|^2 in the UL cell-edge self-interference term instead of |C~_u|^2.
    bool literal_ceu_si_factor = false;

    void validate() const;
};

LinkContext make_link_context(Direction d, const DuplexConfig& cfg, const CrossFactors& factors,
                              UserClass user_class = UserClass::Mixture);

// ---------------------------------------------------------------------------
// Power control and geometry
// ---------------------------------------------------------------------------

struct PowerDensity {
    double density = 0.0;     // continuous part at x, 1/W
    double point_mass = 0.0;  // atom at P_u_max
};

/// Mixed law of the channel-inversion transmit power on (0, P_u_max].
PowerDensity pu_density(double x, const NetworkParams& p);

/// E[P_u^(2/eta)].
double pu_frac_moment(const NetworkParams& p);

/// E[g(P_u)] over the mixed power law. The continuous part is integrated in
/// u = pi lambda (x/rho)^(2/eta), where it has density e^-u on (0, u_M).
template <class G>
double pu_expectation(const G& g, const NetworkParams& p, const QuadratureSpec& spec);

/// (P{CCU}, P{CEU}).
std::pair<double, double> class_probabilities(const NetworkParams& p);

/// Truncated Rayleigh service-distance densities. Throws DomainError off-support.
double service_distance_pdf(UserClass c, double r, const NetworkParams& p);

// ---------------------------------------------------------------------------
// Interference Laplace transforms
// ---------------------------------------------------------------------------

enum class LTKind { uu_ccu, du_shared, uu_ceu, dd_shared, ud_ccu, ud_ceu };
enum class LtPath { Auto, General, ClosedForm };

std::string_view to_string(LTKind k);
bool needs_distance(LTKind k);

inline constexpr QuadratureSpec kInnerSpec{1e-9, 0.0, 2000, true};

/// Laplace transform of the aggregate interference of `kind` at s.
/// Auto uses the arctan closed forms when eta is 4 and the 2F1 forms otherwise.
/// Throws DomainError when r_o is missing or nonpositive for uu_ceu / dd_shared.
double lt_interference(LTKind kind, double s, const NetworkParams& p, std::optional<double> r_o = std::nullopt,
                       const QuadratureSpec& spec = kInnerSpec, LtPath path = LtPath::Auto);

/// Jensen bound on the cell-edge UL intra-mode LT (eta = 4). Never below the exact value.
double lt_uu_ceu_jensen(double s, const NetworkParams& p, double r_o);

// ---------------------------------------------------------------------------
// Performance metrics
// ---------------------------------------------------------------------------

/// P{SINR > x} for a test link at service distance r (ignored for UL CCU).
double success_probability(Direction d, UserClass c, double x, double r, const LinkContext& ctx,
                           const NetworkParams& p, const QuadratureSpec& spec = kInnerSpec);

/// Average BEP E[omega1 erfc sqrt(omega2 SINR)].
double bep(const LinkContext& ctx, const NetworkParams& p, const QuadratureSpec& spec = kImproperIntegralSpec);

/// P{SINR < theta}.
double outage(double theta, const LinkContext& ctx, const NetworkParams& p,
              const QuadratureSpec& spec = kImproperIntegralSpec);

enum class SpecialForm { Exact, ErfcApprox };

/// Interference-limited, eta = 4, uncapped UL power. UL is a closed form;
/// DL Exact is a single r-integral and DL ErfcApprox the erfc closed form
/// (requires beta = 0).
double outage_special(double theta, const LinkContext& ctx, const NetworkParams& p,
                      SpecialForm form = SpecialForm::Exact, const QuadratureSpec& spec = kImproperIntegralSpec);

enum class RateKind { Ergodic, Effective };
enum class RateModel { General, Special, SpecialErfcApprox };

/// Ergodic rate (theta ignored) or effective rate in bit/s.
double rate(RateKind kind, double theta, const LinkContext& ctx, const NetworkParams& p,
            const QuadratureSpec& spec = kImproperIntegralSpec, RateModel model = RateModel::General);

struct GainCondition {
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    bool degenerate = false;  // alpha = 0: ln(1+alpha) vanishes
};

/// sqrt(rho/P_d) against pi^2 lambda theta / (2 ln(1+alpha)) (|C~_u(alpha)| - |C~_u(0)|).
GainCondition ul_gain_condition(double alpha, double theta, double eff_cross_u_alpha, double eff_cross_u_zero,
                                const NetworkParams& p);

/// E_DL(alpha, theta) / E_DL(0, theta) with both rates from the erfc closed form.
double dl_gain(double theta, const DuplexConfig& cfg, double eff_cross_d_alpha, double eff_cross_d_zero,
               const NetworkParams& p);

// ---------------------------------------------------------------------------

template <class G>
double pu_expectation(const G& g, const NetworkParams& p, const QuadratureSpec& spec) {
    const double pl = 3.14159265358979323846 * p.lambda;
    const double half_eta = p.eta / 2;
    const double u_max = pl * std::pow(p.P_u_max / p.rho, 2.0 / p.eta);
    auto f = [&](double u) { return g(p.rho * std::pow(u / pl, half_eta)) * std::exp(-u); };
    double cont;
    if (std::isinf(u_max)) {
        cont = integrate(f, Interval::ray(0.0, 1.0), spec, 5);
        return cont;
    }
    cont = integrate(f, Interval::finite(0.0, u_max), spec, 5);
    return cont + g(p.P_u_max) * std::exp(-u_max);
}

}  // namespace fdcell
