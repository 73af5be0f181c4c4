#include "fdcell/runner.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "fdcell/error.hpp"

namespace fdcell {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr Direction kDirections[] = {Direction::Uplink, Direction::Downlink};

struct SweepPoint {
    double alpha = 0.0;
    NetworkParams params;
    double theta = 1.0;
};

std::vector<SweepPoint> sweep_points(const RunSpec& spec) {
    SweepPoint base{spec.duplex.alpha, spec.params, spec.theta};
    if (spec.sweep_variable == SweepVariable::None) return {base};
    std::vector<SweepPoint> out;
    for (double v : spec.grid) {
        SweepPoint pt = base;
        switch (spec.sweep_variable) {
            case SweepVariable::Alpha: pt.alpha = v; break;
            case SweepVariable::Lambda: pt.params.lambda = v; break;
            case SweepVariable::Beta: pt.params.beta = v; break;
            case SweepVariable::Theta: pt.theta = v; break;
            case SweepVariable::None: break;
        }
        out.push_back(pt);
    }
    return out;
}

std::vector<Cell> point_cells(const SweepPoint& pt) {
    return {pt.alpha, pt.params.lambda, pt.params.beta, pt.theta};
}

const std::vector<std::string> kPointColumns{"alpha", "lambda_per_m2", "beta", "theta"};

void append_error(std::string& errors, const std::string& where, const std::exception& e) {
    if (!errors.empty()) errors += "; ";
    errors += where + ": " + e.what();
}

LinkContext context_for(Direction d, const RunSpec& spec, const DuplexConfig& cfg, const CrossFactors& f) {
    LinkContext ctx = make_link_context(d, cfg, f);
    ctx.literal_ceu_si_factor = spec.literal_ceu_si_factor;
    return ctx;
}

double analytic_metric(MetricKind k, double theta, const LinkContext& ctx, const NetworkParams& p,
                       const QuadratureSpec& qs, RateModel model) {
    switch (k) {
        case MetricKind::BEP: return bep(ctx, p, qs);
        case MetricKind::Outage:
            switch (model) {
                case RateModel::General: return outage(theta, ctx, p, qs);
                case RateModel::Special: return outage_special(theta, ctx, p, SpecialForm::Exact, qs);
                case RateModel::SpecialErfcApprox:
                    return outage_special(theta, ctx, p,
                                          ctx.direction == Direction::Downlink ? SpecialForm::ErfcApprox
                                                                               : SpecialForm::Exact,
                                          qs);
            }
            break;
        case MetricKind::ErgodicRate: return rate(RateKind::Ergodic, theta, ctx, p, qs, model);
        case MetricKind::EffectiveRate: return rate(RateKind::Effective, theta, ctx, p, qs, model);
    }
    return kNaN;
}

nlohmann::ordered_json echo(const RunSpec& spec) {
    const NetworkParams& p = spec.params;
    nlohmann::ordered_json m;
    m["mode"] = std::string(to_string(spec.mode));
    m["seed"] = spec.sim.seed;
    auto& net = m["network"];
    net["lambda_per_m2"] = p.lambda;
    net["rho_w"] = p.rho;
    net["P_d_w"] = p.P_d;
    net["P_u_max_w"] = std::isinf(p.P_u_max) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(p.P_u_max);
    net["eta"] = p.eta;
    net["beta"] = p.beta;
    net["N_o_w"] = p.N_o;
    net["omega"] = {p.omega1_u, p.omega2_u, p.omega1_d, p.omega2_d};
    m["duplex"] = {{"B_u_hz", spec.duplex.B_u}, {"B_d_hz", spec.duplex.B_d}, {"alpha", spec.duplex.alpha}};
    m["pulses"] = {{"ul", spec.pulse_u.name()}, {"dl", spec.pulse_d.name()}};
    m["sweep"] = {{"variable", std::string(to_string(spec.sweep_variable))}, {"values", spec.grid}};
    auto metrics = nlohmann::ordered_json::array();
    for (auto k : spec.metrics) metrics.push_back(std::string(to_string(k)));
    m["metrics"] = {{"list", metrics},
                    {"theta", spec.theta},
                    {"model", spec.model == RateModel::General    ? "general"
                              : spec.model == RateModel::Special ? "special"
                                                                 : "special_erfc"},
                    {"ceu_si_factor", spec.literal_ceu_si_factor ? "literal" : "matched"},
                    {"relative_tolerance", spec.relative_tolerance}};
    if (spec.mode == Mode::Simulate || spec.mode == Mode::Validate) {
        const auto& s = spec.sim;
        m["simulation"] = {{"area_side_m", s.area_side},
                           {"window_side_m", s.window_side},
                           {"ue_intensity_per_m2", s.effective_ue_intensity(p)},
                           {"realizations", s.n_realizations},
                           {"fading", s.fading}};
    }
    return m;
}

Table analytic_table(const RunSpec& spec, bool with_special) {
    Table t;
    t.columns = kPointColumns;
    for (const char* c : {"bw_ul_hz", "bw_dl_hz", "eff_cross_u", "eff_cross_d"}) t.columns.push_back(c);
    for (Direction d : kDirections)
        for (auto k : spec.metrics) t.columns.push_back((d == Direction::Uplink ? "ul_" : "dl_") + metric_column(k));
    if (with_special)
        for (const char* c : {"ul_outage_special", "dl_outage_special", "dl_outage_erfc", "ul_gain_lhs", "ul_gain_rhs",
                              "ul_gain_satisfied", "dl_gain"})
            t.columns.push_back(c);
    t.columns.push_back("error");

    const auto points = sweep_points(spec);
    const QuadratureSpec qs{spec.relative_tolerance, 0.0, 2000, true};
    std::optional<CrossFactors> zero;
    if (with_special) zero = overlap_factors(spec.pulse_u, spec.pulse_d, spec.duplex.with_alpha(0.0));

    std::vector<std::vector<Cell>> rows(points.size());
    parallel_for(points.size(), resolve_threads(spec.sim.threads), [&](std::size_t i) {
        const SweepPoint& pt = points[i];
        const DuplexConfig cfg = spec.duplex.with_alpha(pt.alpha);
        std::vector<Cell> row = point_cells(pt);
        row.insert(row.end(), {cfg.band_width(Direction::Uplink), cfg.band_width(Direction::Downlink)});
        std::string errors;
        std::optional<CrossFactors> f;
        try {
            f = overlap_factors(spec.pulse_u, spec.pulse_d, cfg);
        } catch (const std::exception& e) {
            append_error(errors, "overlap_factors", e);
        }
        row.push_back(f ? f->eff_cross_u : kNaN);
        row.push_back(f ? f->eff_cross_d : kNaN);
        for (Direction d : kDirections) {
            for (auto k : spec.metrics) {
                double v = kNaN;
                if (f) {
                    try {
                        v = analytic_metric(k, pt.theta, context_for(d, spec, cfg, *f), pt.params, qs, spec.model);
                    } catch (const std::exception& e) {
                        append_error(errors, std::string(to_string(d)) + " " + std::string(to_string(k)), e);
                    }
                }
                row.push_back(v);
            }
        }
        if (with_special) {
            double ul_s = kNaN, dl_s = kNaN, dl_e = kNaN, lhs = kNaN, rhs = kNaN, gain = kNaN;
            bool satisfied = false;
            if (f) {
                auto guard = [&](const char* what, auto&& fn) {
                    try {
                        fn();
                    } catch (const std::exception& e) {
                        append_error(errors, what, e);
                    }
                };
                const LinkContext ul = context_for(Direction::Uplink, spec, cfg, *f);
                const LinkContext dl = context_for(Direction::Downlink, spec, cfg, *f);
                guard("ul_outage_special", [&] { ul_s = outage_special(pt.theta, ul, pt.params); });
                guard("dl_outage_special", [&] { dl_s = outage_special(pt.theta, dl, pt.params); });
                if (pt.params.beta == 0.0)
                    guard("dl_outage_erfc",
                          [&] { dl_e = outage_special(pt.theta, dl, pt.params, SpecialForm::ErfcApprox); });
                guard("ul_gain", [&] {
                    const auto g = ul_gain_condition(pt.alpha, pt.theta, f->eff_cross_u, zero->eff_cross_u, pt.params);
                    lhs = g.lhs;
                    rhs = g.rhs;
                    satisfied = g.satisfied;
                });
                if (pt.params.beta == 0.0)
                    guard("dl_gain",
                          [&] { gain = dl_gain(pt.theta, cfg, f->eff_cross_d, zero->eff_cross_d, pt.params); });
            }
            row.insert(row.end(), {ul_s, dl_s, dl_e, lhs, rhs, satisfied, gain});
        }
        row.push_back(errors);
        rows[i] = std::move(row);
    });
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

// Monte Carlo runs keyed by lambda: one run unless lambda is swept.
std::map<double, SimulationResult> simulations(const RunSpec& spec, const std::vector<SweepPoint>& points) {
    std::map<double, SimulationResult> out;
    for (const auto& pt : points) {
        if (out.count(pt.params.lambda)) continue;
        out.emplace(pt.params.lambda, simulate(pt.params, spec.sim));
    }
    return out;
}

Table mc_table(const RunSpec& spec, bool with_analytic) {
    Table t;
    t.columns = kPointColumns;
    t.columns.insert(t.columns.end(), {"direction", "metric"});
    if (with_analytic) t.columns.push_back("analytic");
    t.columns.insert(t.columns.end(), {"mc_mean", "mc_ci95", "n_samples"});
    if (with_analytic) t.columns.insert(t.columns.end(), {"within_ci", "rel_gap"});
    t.columns.push_back("error");

    const auto points = sweep_points(spec);
    const auto sims = simulations(spec, points);
    const QuadratureSpec qs{spec.relative_tolerance, 0.0, 2000, true};
    const std::size_t per_point = 2 * spec.metrics.size();

    std::vector<std::vector<Cell>> rows(points.size() * per_point);
    parallel_for(points.size(), resolve_threads(spec.sim.threads), [&](std::size_t i) {
        const SweepPoint& pt = points[i];
        const DuplexConfig cfg = spec.duplex.with_alpha(pt.alpha);
        const SimulationResult& sim = sims.at(pt.params.lambda);
        std::optional<CrossFactors> f;
        std::string factor_error;
        try {
            f = overlap_factors(spec.pulse_u, spec.pulse_d, cfg);
        } catch (const std::exception& e) {
            append_error(factor_error, "overlap_factors", e);
        }
        std::size_t slot = i * per_point;
        for (Direction d : kDirections) {
            for (auto k : spec.metrics) {
                std::string errors = factor_error;
                std::vector<Cell> row = point_cells(pt);
                row.push_back(std::string(to_string(d)));
                row.push_back(std::string(to_string(k)));
                double analytic = kNaN;
                MetricEstimate est{kNaN, kNaN, 0};
                if (f) {
                    const LinkContext ctx = context_for(d, spec, cfg, *f);
                    if (with_analytic) {
                        try {
                            analytic = analytic_metric(k, pt.theta, ctx, pt.params, qs, spec.model);
                        } catch (const std::exception& e) {
                            append_error(errors, "analytic", e);
                        }
                    }
                    try {
                        est = estimate_metric(sim, Metric{k, pt.theta}, ctx, pt.params);
                    } catch (const std::exception& e) {
                        append_error(errors, "monte_carlo", e);
                    }
                }
                if (with_analytic) row.push_back(analytic);
                row.insert(row.end(), {est.mean, est.ci_halfwidth, static_cast<std::int64_t>(est.n_samples)});
                if (with_analytic) {
                    const bool inside = std::abs(analytic - est.mean) <= est.ci_halfwidth;
                    const double gap = est.mean != 0.0 ? std::abs(analytic - est.mean) / std::abs(est.mean) : kNaN;
                    row.insert(row.end(), {inside, gap});
                }
                row.push_back(errors);
                rows[slot++] = std::move(row);
            }
        }
    });
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

Table pulses_table(const RunSpec& spec) {
    const double rolloff = spec.pulse_u.kind == PulseShape::Kind::RRC   ? spec.pulse_u.rolloff
                           : spec.pulse_d.kind == PulseShape::Kind::RRC ? spec.pulse_d.rolloff
                                                                        : 0.22;
    const std::vector<std::pair<std::string, std::pair<PulseShape, PulseShape>>> pairs{
        {"rect_rect", {PulseShape::rect(), PulseShape::rect()}},
        {"rrc_rrc", {PulseShape::rrc(rolloff), PulseShape::rrc(rolloff)}},
        {"sinc_sinc", {PulseShape::sinc(), PulseShape::sinc()}},
        {"sinc2_sinc2", {PulseShape::sinc_sq(), PulseShape::sinc_sq()}},
        {"sinc2_sinc", {PulseShape::sinc_sq(), PulseShape::sinc()}},
    };
    Table t;
    t.columns = {"alpha"};
    for (const auto& [name, pair] : pairs) {
        t.columns.push_back(name + "_u");
        t.columns.push_back(name + "_d");
    }
    t.columns.push_back("error");

    const auto n = static_cast<std::size_t>(std::llround(std::floor(1.0 / spec.pulses_step + 1e-9)));
    std::vector<std::vector<Cell>> rows(n + 1);
    parallel_for(n + 1, resolve_threads(spec.sim.threads), [&](std::size_t i) {
        const double alpha = std::min(1.0, static_cast<double>(i) / (1.0 / spec.pulses_step));
        const DuplexConfig cfg = spec.duplex.with_alpha(alpha);
        std::vector<Cell> row{alpha};
        std::string errors;
        for (const auto& [name, pair] : pairs) {
            try {
                const CrossFactors f = overlap_factors(pair.first, pair.second, cfg);
                row.insert(row.end(), {f.eff_cross_u, f.eff_cross_d});
            } catch (const std::exception& e) {
                append_error(errors, name, e);
                row.insert(row.end(), {kNaN, kNaN});
            }
        }
        row.push_back(errors);
        rows[i] = std::move(row);
    });
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

}  // namespace

std::string metric_column(MetricKind k) {
    switch (k) {
        case MetricKind::BEP: return "bep";
        case MetricKind::Outage: return "outage";
        case MetricKind::ErgodicRate: return "ergodic_rate_bps";
        case MetricKind::EffectiveRate: return "effective_rate_bps";
    }
    return "?";
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
    if (count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
}

Table run(const RunSpec& spec) {
    spec.validate();
    Table t;
    switch (spec.mode) {
        case Mode::Analytic: t = analytic_table(spec, false); break;
        case Mode::Sweep: t = analytic_table(spec, true); break;
        case Mode::Simulate: t = mc_table(spec, false); break;
        case Mode::Validate: t = mc_table(spec, true); break;
        case Mode::Pulses: t = pulses_table(spec); break;
    }
    t.metadata = echo(spec);
    return t;
}

}  // namespace fdcell
