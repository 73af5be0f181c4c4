#include "fdcell/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fdcell/error.hpp"

namespace fdcell {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Accepts the Unicode minus sign as well.
std::string normalize(std::string_view text) {
    std::string s(text);
    const std::string unicode_minus = "\xE2\x88\x92";
    for (std::size_t pos; (pos = s.find(unicode_minus)) != std::string::npos;) s.replace(pos, unicode_minus.size(), "-");
    return trim(s);
}

// Splits "<number> <unit>" (the space is optional).
std::pair<double, std::string> split_quantity(std::string_view text, const std::string& field) {
    const std::string s = normalize(text);
    if (s.empty()) throw ConfigError(field, "empty value");
    const std::string ls = lower(s);
    if (ls == "inf" || ls == "+inf" || ls == "infinity") return {HUGE_VAL, ""};
    double value = 0.0;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
    if (ec != std::errc()) throw ConfigError(field, "expected a number, got '" + s + "'");
    return {value, trim(std::string_view(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr)))};
}

[[noreturn]] void bad_unit(const std::string& field, const std::string& unit) {
    throw ConfigError(field, "unknown unit '" + unit + "'");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool parse_bool(const std::string& text, const std::string& field) {
    const std::string s = lower(trim(text));
    if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
    if (s == "false" || s == "no" || s == "off" || s == "0") return false;
    throw ConfigError(field, "expected a boolean, got '" + text + "'");
}

long parse_integer(const std::string& text, const std::string& field) {
    const std::string s = trim(text);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(field, "expected an integer, got '" + s + "'");
    return v;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"network", {"lambda", "rho", "P_d", "P_u_max", "eta", "beta", "N_o", "omega1_u", "omega2_u", "omega1_d",
                     "omega2_d"}},
        {"duplex", {"B_u", "B_d", "alpha"}},
        {"pulses", {"ul", "dl", "rrc_rolloff", "step"}},
        {"sweep", {"variable", "values", "range"}},
        {"metrics", {"list", "theta", "model", "ceu_si_factor", "relative_tolerance"}},
        {"simulation", {"area_side", "window_side", "ue_intensity", "realizations", "seed", "fading", "threads"}},
        {"output", {"path", "format"}},
    };
    return keys;
}

MetricKind parse_metric(const std::string& name, const std::string& field) {
    const std::string s = lower(name);
    if (s == "bep") return MetricKind::BEP;
    if (s == "outage") return MetricKind::Outage;
    if (s == "ergodic_rate" || s == "ergodic") return MetricKind::ErgodicRate;
    if (s == "effective_rate" || s == "effective") return MetricKind::EffectiveRate;
    throw ConfigError(field, "unknown metric '" + name + "'");
}

OutputFormat parse_format(const std::string& text, const std::string& field) {
    const std::string s = lower(trim(text));
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError(field, "format must be csv or json");
}

bool is_alpha_sp(const std::string& token) { return lower(trim(token)) == "alpha_sp"; }

}  // namespace

std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::Analytic: return "analytic";
        case Mode::Simulate: return "simulate";
        case Mode::Validate: return "validate";
        case Mode::Sweep: return "sweep";
        case Mode::Pulses: return "pulses";
    }
    return "?";
}

std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::None: return "none";
        case SweepVariable::Alpha: return "alpha";
        case SweepVariable::Lambda: return "lambda";
        case SweepVariable::Beta: return "beta";
        case SweepVariable::Theta: return "theta";
    }
    return "?";
}

double parse_number(std::string_view text, const std::string& field) {
    auto [v, unit] = split_quantity(text, field);
    if (!unit.empty()) bad_unit(field, unit);
    return v;
}

double parse_power(std::string_view text, const std::string& field) {
    auto [v, unit] = split_quantity(text, field);
    const std::string u = lower(unit);
    if (u.empty() || u == "w") return v;
    if (u == "mw") return v * 1e-3;
    if (u == "dbm") return std::pow(10.0, (v - 30.0) / 10.0);
    if (u == "dbw") return std::pow(10.0, v / 10.0);
    bad_unit(field, unit);
}

double parse_ratio(std::string_view text, const std::string& field) {
    auto [v, unit] = split_quantity(text, field);
    const std::string u = lower(unit);
    if (u.empty()) return v;
    if (u == "db") return std::pow(10.0, v / 10.0);
    bad_unit(field, unit);
}

double parse_frequency(std::string_view text, const std::string& field) {
    auto [v, unit] = split_quantity(text, field);
    const std::string u = lower(unit);
    if (u.empty() || u == "hz") return v;
    if (u == "khz") return v * 1e3;
    if (u == "mhz") return v * 1e6;
    if (u == "ghz") return v * 1e9;
    bad_unit(field, unit);
}

double parse_density(std::string_view text, const std::string& field) {
    auto [v, unit] = split_quantity(text, field);
    std::string u = lower(unit);
    u.erase(std::remove(u.begin(), u.end(), ' '), u.end());
    if (u.empty() || u == "/m2" || u == "/m^2") return v;
    if (u == "/km2" || u == "/km^2") return v * 1e-6;
    bad_unit(field, unit);
}

double parse_length(std::string_view text, const std::string& field) {
    auto [v, unit] = split_quantity(text, field);
    const std::string u = lower(unit);
    if (u.empty() || u == "m") return v;
    if (u == "km") return v * 1e3;
    bad_unit(field, unit);
}

void RunSpec::validate() const {
    auto wrap = [](const std::string& field, auto&& check) {
        try {
            check();
        } catch (const DomainError& e) {
            throw ConfigError(field, e.what());
        }
    };
    wrap("network", [&] { params.validate(); });
    wrap("duplex", [&] { duplex.validate(); });
    wrap("pulses", [&] {
        pulse_u.validate();
        pulse_d.validate();
    });
    wrap("simulation", [&] { sim.validate(params); });
    if (!(theta > 0.0)) throw ConfigError("metrics.theta", "must be positive");
    if (metrics.empty()) throw ConfigError("metrics.list", "at least one metric is required");
    if (!(relative_tolerance > 0.0 && relative_tolerance < 1.0))
        throw ConfigError("metrics.relative_tolerance", "must be in (0, 1)");
    if (!(pulses_step > 0.0 && pulses_step <= 1.0)) throw ConfigError("pulses.step", "must be in (0, 1]");
    if (sweep_variable != SweepVariable::None) {
        if (grid.empty()) throw ConfigError("sweep.values", "grid is empty");
        if (!std::is_sorted(grid.begin(), grid.end()) ||
            std::adjacent_find(grid.begin(), grid.end()) != grid.end())
            throw ConfigError("sweep.values", "grid must be strictly increasing");
        for (double v : grid) {
            if (sweep_variable == SweepVariable::Alpha && !(v >= 0.0 && v <= 1.0))
                throw ConfigError("sweep.values", "alpha must be in [0, 1]");
            if (sweep_variable != SweepVariable::Alpha && sweep_variable != SweepVariable::Beta && !(v > 0.0))
                throw ConfigError("sweep.values", "values must be positive");
            if (sweep_variable == SweepVariable::Beta && !(v >= 0.0))
                throw ConfigError("sweep.values", "beta must be nonnegative");
        }
    }
    if (mode == Mode::Sweep && sweep_variable == SweepVariable::None)
        throw ConfigError("sweep.variable", "sweep mode needs a sweep grid");
    if ((mode == Mode::Simulate || mode == Mode::Validate) && sim.n_realizations < 30)
        throw ConfigError("simulation.realizations", "at least 30 realizations are needed for a confidence interval");
}

RunSpec parse_config_text(const std::string& text, Mode mode, const FlagOverrides& flags) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()), e.message());
    }

    for (const auto& [section, body] : tree) {
        const auto it = schema().find(section);
        if (body.empty() && !body.data().empty())
            throw ConfigError(section, "key outside a section");
        if (it == schema().end()) throw ConfigError(section, "unknown section");
        for (const auto& [key, value] : body) {
            (void)value;
            if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
        }
    }

    RunSpec spec;
    spec.mode = mode;
    auto get = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
        const auto child = tree.get_child_optional(pt::ptree::path_type(section + "/" + key, '/'));
        if (!child) return std::nullopt;
        return trim(child->data());
    };

    NetworkParams& p = spec.params;
    if (auto v = get("network", "lambda")) p.lambda = parse_density(*v, "network.lambda");
    if (auto v = get("network", "rho")) p.rho = parse_power(*v, "network.rho");
    if (auto v = get("network", "P_d")) p.P_d = parse_power(*v, "network.P_d");
    if (auto v = get("network", "P_u_max")) p.P_u_max = parse_power(*v, "network.P_u_max");
    if (auto v = get("network", "eta")) p.eta = parse_number(*v, "network.eta");
    if (auto v = get("network", "beta")) p.beta = parse_ratio(*v, "network.beta");
    if (auto v = get("network", "N_o")) p.N_o = parse_power(*v, "network.N_o");
    if (auto v = get("network", "omega1_u")) p.omega1_u = parse_number(*v, "network.omega1_u");
    if (auto v = get("network", "omega2_u")) p.omega2_u = parse_number(*v, "network.omega2_u");
    if (auto v = get("network", "omega1_d")) p.omega1_d = parse_number(*v, "network.omega1_d");
    if (auto v = get("network", "omega2_d")) p.omega2_d = parse_number(*v, "network.omega2_d");

    if (auto v = get("duplex", "B_u")) spec.duplex.B_u = parse_frequency(*v, "duplex.B_u");
    if (auto v = get("duplex", "B_d")) spec.duplex.B_d = parse_frequency(*v, "duplex.B_d");

    try {
        if (auto v = get("pulses", "ul")) spec.pulse_u = PulseShape::parse(*v);
    } catch (const DomainError& e) {
        throw ConfigError("pulses.ul", e.what());
    }
    try {
        if (auto v = get("pulses", "dl")) spec.pulse_d = PulseShape::parse(*v);
    } catch (const DomainError& e) {
        throw ConfigError("pulses.dl", e.what());
    }
    if (auto v = get("pulses", "rrc_rolloff")) {
        const double r = parse_number(*v, "pulses.rrc_rolloff");
        if (!(r > 0.0 && r <= 1.0)) throw ConfigError("pulses.rrc_rolloff", "must be in (0, 1]");
        for (PulseShape* s : {&spec.pulse_u, &spec.pulse_d})
            if (s->kind == PulseShape::Kind::RRC) s->rolloff = r;
    }
    if (auto v = get("pulses", "step")) spec.pulses_step = parse_number(*v, "pulses.step");

    // alpha_sp depends on the pulses, so it is resolved after they are known.
    std::optional<double> alpha_sp_cache;
    auto alpha_sp = [&](const std::string& field) {
        if (!alpha_sp_cache) {
            try {
                alpha_sp_cache = find_orthogonal_alpha(spec.pulse_u, spec.pulse_d, spec.duplex, 0.0, 1.0);
            } catch (const std::exception& e) {
                throw ConfigError(field, std::string("alpha_sp: ") + e.what());
            }
        }
        return *alpha_sp_cache;
    };
    auto parse_alpha = [&](const std::string& token, const std::string& field) {
        return is_alpha_sp(token) ? alpha_sp(field) : parse_number(token, field);
    };
    if (auto v = get("duplex", "alpha")) {
        spec.duplex.alpha = parse_alpha(*v, "duplex.alpha");
        if (!(spec.duplex.alpha >= 0.0 && spec.duplex.alpha <= 1.0))
            throw ConfigError("duplex.alpha", "must be in [0, 1], got " + trim(*v));
    }

    if (auto v = get("metrics", "list")) {
        spec.metrics.clear();
        for (const auto& name : split_list(*v)) spec.metrics.push_back(parse_metric(name, "metrics.list"));
    }
    if (auto v = get("metrics", "theta")) spec.theta = parse_ratio(*v, "metrics.theta");
    if (auto v = get("metrics", "model")) {
        const std::string m = lower(*v);
        if (m == "general") spec.model = RateModel::General;
        else if (m == "special") spec.model = RateModel::Special;
        else if (m == "special_erfc") spec.model = RateModel::SpecialErfcApprox;
        else throw ConfigError("metrics.model", "must be general, special or special_erfc");
    }
    if (auto v = get("metrics", "ceu_si_factor")) {
        const std::string m = lower(*v);
        if (m == "matched") spec.literal_ceu_si_factor = false;
        else if (m == "literal") spec.literal_ceu_si_factor = true;
        else throw ConfigError("metrics.ceu_si_factor", "must be matched or literal");
    }
    if (auto v = get("metrics", "relative_tolerance"))
        spec.relative_tolerance = parse_number(*v, "metrics.relative_tolerance");

    if (auto v = get("sweep", "variable")) {
        const std::string s = lower(*v);
        if (s == "alpha") spec.sweep_variable = SweepVariable::Alpha;
        else if (s == "lambda") spec.sweep_variable = SweepVariable::Lambda;
        else if (s == "beta") spec.sweep_variable = SweepVariable::Beta;
        else if (s == "theta") spec.sweep_variable = SweepVariable::Theta;
        else if (s == "none") spec.sweep_variable = SweepVariable::None;
        else throw ConfigError("sweep.variable", "must be alpha, lambda, beta or theta");
    }
    auto parse_grid_value = [&](const std::string& token, const std::string& field) {
        switch (spec.sweep_variable) {
            case SweepVariable::Alpha: return parse_alpha(token, field);
            case SweepVariable::Lambda: return parse_density(token, field);
            case SweepVariable::Beta:
            case SweepVariable::Theta: return parse_ratio(token, field);
            case SweepVariable::None: break;
        }
        throw ConfigError(field, "set sweep.variable before giving a grid");
    };
    const auto values = get("sweep", "values");
    const auto range = get("sweep", "range");
    if (values && range) throw ConfigError("sweep.range", "give either values or range, not both");
    if (values) {
        for (const auto& token : split_list(*values)) spec.grid.push_back(parse_grid_value(token, "sweep.values"));
    } else if (range) {
        // start:stop:step on a linear scale, stop included
        std::vector<std::string> parts;
        std::stringstream ss(*range);
        for (std::string part; std::getline(ss, part, ':');) parts.push_back(trim(part));
        if (parts.size() != 3) throw ConfigError("sweep.range", "expected start:stop:step");
        const double start = parse_grid_value(parts[0], "sweep.range");
        const double stop = parse_grid_value(parts[1], "sweep.range");
        const double step = parse_number(parts[2], "sweep.range");
        if (!(step > 0.0) || stop < start) throw ConfigError("sweep.range", "needs step > 0 and stop >= start");
        const long n = std::lround(std::floor((stop - start) / step + 1e-9));
        for (long i = 0; i <= n; ++i) spec.grid.push_back(std::min(start + step * static_cast<double>(i), stop));
    }
    if (spec.sweep_variable != SweepVariable::None && !values && !range)
        throw ConfigError("sweep.values", "sweep variable given without values or range");

    SimulationConfig& sim = spec.sim;
    if (auto v = get("simulation", "area_side")) sim.area_side = parse_length(*v, "simulation.area_side");
    if (auto v = get("simulation", "window_side")) sim.window_side = parse_length(*v, "simulation.window_side");
    if (auto v = get("simulation", "ue_intensity"))
        sim.ue_intensity = lower(*v) == "auto" ? 0.0 : parse_density(*v, "simulation.ue_intensity");
    if (auto v = get("simulation", "realizations"))
        sim.n_realizations = static_cast<int>(parse_integer(*v, "simulation.realizations"));
    if (auto v = get("simulation", "seed")) {
        const long s = parse_integer(*v, "simulation.seed");
        if (s < 0) throw ConfigError("simulation.seed", "must be nonnegative");
        sim.seed = static_cast<std::uint64_t>(s);
    }
    if (auto v = get("simulation", "fading")) sim.fading = parse_bool(*v, "simulation.fading");
    if (auto v = get("simulation", "threads")) sim.threads = static_cast<int>(parse_integer(*v, "simulation.threads"));

    if (auto v = get("output", "path")) spec.output_path = *v;
    if (auto v = get("output", "format")) spec.format = parse_format(*v, "output.format");

    if (flags.alpha) {
        if (!(*flags.alpha >= 0.0 && *flags.alpha <= 1.0)) throw ConfigError("--alpha", "must be in [0, 1]");
        spec.duplex.alpha = *flags.alpha;
        if (spec.sweep_variable == SweepVariable::Alpha) spec.grid = {*flags.alpha};
    }
    if (flags.seed) sim.seed = *flags.seed;
    if (flags.out) spec.output_path = *flags.out;
    if (flags.format) spec.format = *flags.format;
    if (flags.threads) sim.threads = *flags.threads;

    spec.validate();
    return spec;
}

RunSpec parse_config(const std::string& path, Mode mode, const FlagOverrides& flags) {
    if (path.empty()) return parse_config_text("", mode, flags);
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), mode, flags);
}

}  // namespace fdcell
