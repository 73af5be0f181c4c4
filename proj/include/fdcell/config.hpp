#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdcell/analytic.hpp"
#include "fdcell/montecarlo.hpp"
#include "fdcell/pulse.hpp"

namespace fdcell {

enum class Mode { Analytic, Simulate, Validate, Sweep, Pulses };
enum class SweepVariable { None, Alpha, Lambda, Beta, Theta };

std::string_view to_string(Mode m);
std::string_view to_string(SweepVariable v);

/// A fully validated run description.
struct RunSpec {
    Mode mode = Mode::Analytic;
    NetworkParams params = NetworkParams::table1();
    DuplexConfig duplex;
    PulseShape pulse_u = PulseShape::sinc_sq();
    PulseShape pulse_d = PulseShape::sinc();
    SweepVariable sweep_variable = SweepVariable::None;
    std::vector<double> grid;
    std::vector<MetricKind> metrics{MetricKind::BEP, MetricKind::Outage, MetricKind::EffectiveRate};
    double theta = 1.0;
    RateModel model = RateModel::General;
    bool literal_ceu_si_factor = false;
    double relative_tolerance = 1e-6;
    double pulses_step = 0.01;
    SimulationConfig sim;
    std::string output_path;  // empty: stdout
    OutputFormat format = OutputFormat::Csv;

    void validate() const;
};

/// Command-line values that override the file.
struct FlagOverrides {
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<OutputFormat> format;
    std::optional<int> threads;
};

/// "-70 dBm" -> 1e-10 W, "1 W", "200 mW", "inf".
double parse_power(std::string_view text, const std::string& field);
/// "-80 dB" -> 1e-8, or a plain linear value.
double parse_ratio(std::string_view text, const std::string& field);
/// "1 MHz", "200 kHz", "1e6 Hz", "1e6".
double parse_frequency(std::string_view text, const std::string& field);
/// "1 /km2" -> 1e-6 /m2, "1e-6 /m2", "1e-6".
double parse_density(std::string_view text, const std::string& field);
/// "2 km", "2000 m", "2000".
double parse_length(std::string_view text, const std::string& field);
double parse_number(std::string_view text, const std::string& field);

/// Parses INI text on top of Table 1 defaults, then applies the flags.
/// Throws ConfigError naming the offending section.key.
RunSpec parse_config_text(const std::string& text, Mode mode, const FlagOverrides& flags = {});

/// Same, reading the file at `path` (empty path: defaults and flags only).
RunSpec parse_config(const std::string& path, Mode mode, const FlagOverrides& flags = {});

}  // namespace fdcell
