#pragma once

#include <string>
#include <string_view>

#include "fdcell/common.hpp"
#include "fdcell/specfun.hpp"

namespace fdcell {

/// Frequency-domain pulse template. Every template is real, even and has unit
/// energy for any null-to-null width W.
struct PulseShape {
    enum class Kind { Rect, RRC, Sinc, SincSq };

    Kind kind = Kind::Rect;
    double rolloff = 0.22;  // RRC only

    static PulseShape rect() { return {Kind::Rect, 0.0}; }
    static PulseShape rrc(double rolloff = 0.22) { return {Kind::RRC, rolloff}; }
    static PulseShape sinc() { return {Kind::Sinc, 0.0}; }
    static PulseShape sinc_sq() { return {Kind::SincSq, 0.0}; }

    void validate() const;
    std::string name() const;

    /// Accepts "rect", "rrc", "rrc:0.35", "sinc", "sinc2" / "sincsq" (case-insensitive).
    static PulseShape parse(std::string_view text);
};

/// S(f; W) in Hz^-1/2.
///
///   Rect   = 1/sqrt(W) on |f| <= W/2
///   Sinc   = sqrt(2/W) sinc(2f/W)
///   SincSq = sqrt(3/W) sinc^2(2f/W)
///   RRC    = unit-energy root raised cosine with symbol time (1+r)/W
///
/// Throws DomainError if W <= 0.
double spectrum_value(const PulseShape& shape, double W, double f);

/// Bandwidth allocation of one alpha-duplex channel pair.
struct DuplexConfig {
    double B_u = 1e6;
    double B_d = 1e6;
    double alpha = 0.0;

    void validate() const;

    double min_bandwidth() const;
    /// Carrier spacing f_d - f_u = (B_u + B_d)/2 - alpha * B.
    double delta_f() const;
    /// Extended band B_chi + alpha * B: filter width and pulse null-to-null width.
    double band_width(Direction d) const;

    DuplexConfig with_alpha(double a) const {
        DuplexConfig c = *this;
        c.alpha = a;
        return c;
    }
};

/// Intra-mode and cross-mode filter factors for one alpha.
struct CrossFactors {
    double I_u = 1.0;
    double I_d = 1.0;
    double C_u = 0.0;
    double C_d = 0.0;
    double eff_cross_u = 0.0;  // (C_u / I_u)^2
    double eff_cross_d = 0.0;  // (C_d / I_d)^2

    double eff_cross(Direction d) const { return d == Direction::Uplink ? eff_cross_u : eff_cross_d; }
    double intra(Direction d) const { return d == Direction::Uplink ? I_u : I_d; }
};

inline constexpr QuadratureSpec kPulseQuadratureSpec{1e-10, 1e-14, 4000, true};

/// I_chi is the in-band energy of S_chi through its own filter, C_chi the
/// opposite-direction pulse shifted by delta_f seen through the chi filter
/// over +-(B_chibar + alpha B)/2.
CrossFactors overlap_factors(const PulseShape& s_u, const PulseShape& s_d, const DuplexConfig& cfg,
                             const QuadratureSpec& spec = kPulseQuadratureSpec);

/// C_u(alpha) alone (the UL decoder cross-mode amplitude).
double cross_amplitude(Direction d, const PulseShape& s_u, const PulseShape& s_d, const DuplexConfig& cfg,
                       const QuadratureSpec& spec = kPulseQuadratureSpec);

/// Root of C_u(alpha) in [lo, hi]; |C_u| < 1e-6 |I_u| counts as a root.
/// Throws NoRootError when C_u keeps one sign above tolerance across the bracket.
double find_orthogonal_alpha(const PulseShape& s_u, const PulseShape& s_d, const DuplexConfig& family, double lo,
                             double hi);

/// Filtered noise power N_o * I_chi^2.
double noise_power(Direction d, const DuplexConfig& cfg, double N_o, const CrossFactors& factors);

}  // namespace fdcell
