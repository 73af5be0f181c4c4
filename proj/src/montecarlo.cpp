#include "fdcell/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "fdcell/error.hpp"

namespace fdcell {

namespace {

bool in_window(const Point& q, double half) { return std::abs(q.x) < half && std::abs(q.y) < half; }

double dist2(const Point& a, const Point& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// d^-eta from a squared distance.
double path_gain(double d2, double eta) {
    if (eta == 4.0) return 1.0 / (d2 * d2);
    return std::pow(d2, -eta / 2);
}

class BsGrid {
public:
    BsGrid(const std::vector<Point>& bs, double side, double lambda) : bs_(bs), side_(side) {
        n_ = std::clamp(static_cast<int>(side * std::sqrt(lambda)), 1, 512);
        cell_ = side / n_;
        cells_.resize(static_cast<std::size_t>(n_) * n_);
        for (int i = 0; i < static_cast<int>(bs.size()); ++i) cells_[index(cell_of(bs[i].x), cell_of(bs[i].y))].push_back(i);
    }

    int nearest(const Point& q) const {
        const int cx = cell_of(q.x), cy = cell_of(q.y);
        int best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= n_; ++k) {
            for (int gx = cx - k; gx <= cx + k; ++gx) {
                if (gx < 0 || gx >= n_) continue;
                for (int gy = cy - k; gy <= cy + k; ++gy) {
                    if (gy < 0 || gy >= n_) continue;
                    if (std::max(std::abs(gx - cx), std::abs(gy - cy)) != k) continue;
                    for (int i : cells_[index(gx, gy)]) {
                        const double d2 = dist2(q, bs_[i]);
                        if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
                            best_d2 = d2;
                            best = i;
                        }
                    }
                }
            }
            const double reach = k * cell_;
            if (best >= 0 && best_d2 <= reach * reach) break;
        }
        return best;
    }

private:
    int cell_of(double v) const {
        return std::clamp(static_cast<int>((v + side_ / 2) / cell_), 0, n_ - 1);
    }
    std::size_t index(int gx, int gy) const { return static_cast<std::size_t>(gx) * n_ + gy; }

    const std::vector<Point>& bs_;
    double side_;
    int n_;
    double cell_;
    std::vector<std::vector<int>> cells_;
};

std::vector<Point> uniform_points(long n, double side, Philox4x32& rng) {
    std::vector<Point> pts(static_cast<std::size_t>(n));
    for (auto& q : pts) {
        q.x = (rng.uniform() - 0.5) * side;
        q.y = (rng.uniform() - 0.5) * side;
    }
    return pts;
}

struct RealizationOutput {
    std::vector<LinkSample> uplink;
    std::vector<LinkSample> downlink;
    std::vector<ScheduledRecord> scheduled;
    int resampled = 0;
};

}  // namespace

void SimulationConfig::validate(const NetworkParams& p) const {
    if (!(area_side > 0.0)) throw DomainError("SimulationConfig: area_side must be positive");
    if (!(window_side > 0.0 && window_side < area_side))
        throw DomainError("SimulationConfig: window_side must be positive and below area_side");
    if (!(ue_intensity >= 0.0)) throw DomainError("SimulationConfig: ue_intensity must be nonnegative");
    if (effective_ue_intensity(p) < 20.0 * p.lambda)
        throw DomainError("SimulationConfig: ue_intensity must be at least 20 lambda");
    if (n_realizations < 1) throw DomainError("SimulationConfig: n_realizations must be positive");
    if (threads < 0) throw DomainError("SimulationConfig: threads must be nonnegative");
}

double SimulationConfig::effective_ue_intensity(const NetworkParams& p) const {
    return ue_intensity > 0.0 ? ue_intensity : 50.0 * p.lambda;
}

NetworkRealization sample_realization(const NetworkParams& p, const SimulationConfig& sim, Philox4x32& stream) {
    p.validate();
    sim.validate(p);
    const double area = sim.area_side * sim.area_side;
    const double half = sim.window_side / 2;
    NetworkRealization real;
    for (;;) {
        std::poisson_distribution<long> n_bs(p.lambda * area);
        real.bs_points = uniform_points(n_bs(stream), sim.area_side, stream);
        if (std::any_of(real.bs_points.begin(), real.bs_points.end(), [&](const Point& q) { return in_window(q, half); }))
            break;
        ++real.resampled;
    }
    std::poisson_distribution<long> n_ue(sim.effective_ue_intensity(p) * area);
    real.ue_points = uniform_points(n_ue(stream), sim.area_side, stream);

    const std::size_t nb = real.bs_points.size();
    BsGrid grid(real.bs_points, sim.area_side, p.lambda);
    real.association.resize(real.ue_points.size());
    real.scheduled_ue.assign(nb, -1);
    std::vector<int> seen(nb, 0);
    for (std::size_t u = 0; u < real.ue_points.size(); ++u) {
        const int b = grid.nearest(real.ue_points[u]);
        real.association[u] = b;
        // Reservoir sampling keeps each associated UE with equal probability.
        ++seen[b];
        if (stream.uniform() * seen[b] < 1.0) real.scheduled_ue[b] = static_cast<int>(u);
    }

    real.ul_tx_power.assign(nb, 0.0);
    real.service_distance.assign(nb, 0.0);
    real.user_class.assign(nb, UserClass::CellCenter);
    for (std::size_t b = 0; b < nb; ++b) {
        const int u = real.scheduled_ue[b];
        if (u < 0) continue;
        const double r = std::sqrt(dist2(real.ue_points[u], real.bs_points[b]));
        const double inverted = p.rho * std::pow(r, p.eta);
        real.service_distance[b] = r;
        real.ul_tx_power[b] = std::min(inverted, p.P_u_max);
        real.user_class[b] = inverted > p.P_u_max ? UserClass::CellEdge : UserClass::CellCenter;
    }
    return real;
}

double sinr(const LinkSample& s, double eff_cross, double beta, double N_o) {
    return s.signal / (s.intra + eff_cross * s.cross + beta * s.own_power * eff_cross + N_o);
}

std::vector<LinkSample> link_samples(const NetworkRealization& real, Direction d, const NetworkParams& p,
                                     const SimulationConfig& sim, Philox4x32& rng) {
    const double half = sim.window_side / 2;
    auto fade = [&] { return sim.fading ? rng.exponential() : 1.0; };
    const auto& bs = real.bs_points;
    const auto& ue = real.ue_points;
    const std::size_t nb = bs.size();
    std::vector<LinkSample> out;

    for (std::size_t b = 0; b < nb; ++b) {
        const int j = real.scheduled_ue[b];
        if (j < 0) continue;
        const Point& rx = d == Direction::Uplink ? bs[b] : ue[j];
        if (!in_window(rx, half)) continue;

        LinkSample s;
        const double r2 = real.service_distance[b] * real.service_distance[b];
        if (d == Direction::Uplink) {
            s.signal = real.ul_tx_power[b] * fade() * path_gain(r2, p.eta);
            s.own_power = p.P_d;
        } else {
            s.signal = p.P_d * fade() * path_gain(r2, p.eta);
            s.own_power = real.ul_tx_power[b];
        }
        double ue_sum = 0.0, bs_sum = 0.0;
        for (std::size_t m = 0; m < nb; ++m) {
            if (m == b) continue;
            bs_sum += p.P_d * fade() * path_gain(dist2(bs[m], rx), p.eta);
            const int k = real.scheduled_ue[m];
            if (k >= 0) ue_sum += real.ul_tx_power[m] * fade() * path_gain(dist2(ue[k], rx), p.eta);
        }
        if (d == Direction::Uplink) {
            s.intra = ue_sum;
            s.cross = bs_sum;
        } else {
            s.intra = bs_sum;
            s.cross = ue_sum;
        }
        out.push_back(s);
    }
    return out;
}

std::vector<double> sinr_sample(const NetworkRealization& real, Direction d, const CrossFactors& factors,
                                const NetworkParams& p, const SimulationConfig& sim, Philox4x32& rng) {
    std::vector<double> out;
    for (const auto& s : link_samples(real, d, p, sim, rng))
        out.push_back(sinr(s, factors.eff_cross(d), p.beta, p.N_o));
    return out;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FDCELL_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SimulationResult simulate(const NetworkParams& p, const SimulationConfig& sim) {
    p.validate();
    sim.validate(p);
    const int n = sim.n_realizations;
    std::vector<RealizationOutput> parts(static_cast<std::size_t>(n));
    std::atomic<int> next{0};

    auto worker = [&] {
        for (int i = next++; i < n; i = next++) {
            Philox4x32 rng(sim.seed, static_cast<std::uint64_t>(i));
            const NetworkRealization real = sample_realization(p, sim, rng);
            RealizationOutput& out = parts[static_cast<std::size_t>(i)];
            out.resampled = real.resampled;
            out.uplink = link_samples(real, Direction::Uplink, p, sim, rng);
            out.downlink = link_samples(real, Direction::Downlink, p, sim, rng);
            const double half = sim.window_side / 2;
            for (std::size_t b = 0; b < real.bs_points.size(); ++b) {
                const int u = real.scheduled_ue[b];
                if (u < 0 || !in_window(real.ue_points[u], half)) continue;
                out.scheduled.push_back(
                    {real.service_distance[b], real.ul_tx_power[b], real.user_class[b] == UserClass::CellEdge});
            }
        }
    };

    const int threads = std::min(resolve_threads(sim.threads), n);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SimulationResult result;
    result.realizations = n;
    result.seed = sim.seed;
    for (auto& part : parts) {
        result.uplink.insert(result.uplink.end(), part.uplink.begin(), part.uplink.end());
        result.downlink.insert(result.downlink.end(), part.downlink.begin(), part.downlink.end());
        result.scheduled.insert(result.scheduled.end(), part.scheduled.begin(), part.scheduled.end());
        result.resampled += part.resampled;
    }
    return result;
}

std::string_view to_string(MetricKind k) {
    switch (k) {
        case MetricKind::BEP: return "bep";
        case MetricKind::Outage: return "outage";
        case MetricKind::ErgodicRate: return "ergodic_rate";
        case MetricKind::EffectiveRate: return "effective_rate";
    }
    return "?";
}

MetricEstimate estimate_from_sinr(const std::vector<double>& sinr_values, Metric metric, double bandwidth_hz,
                                  double omega1, double omega2) {
    if (sinr_values.empty()) throw InsufficientSamplesError("estimate_metric: no SINR samples");
    if ((metric.kind == MetricKind::Outage || metric.kind == MetricKind::EffectiveRate) && !(metric.theta > 0.0))
        throw DomainError("estimate_metric: theta must be positive");
    auto value = [&](double s) {
        switch (metric.kind) {
            case MetricKind::BEP: return omega1 * std::erfc(std::sqrt(omega2 * s));
            case MetricKind::Outage: return s < metric.theta ? 1.0 : 0.0;
            case MetricKind::ErgodicRate: return bandwidth_hz * std::log2(1.0 + s);
            case MetricKind::EffectiveRate:
                return s < metric.theta ? 0.0 : bandwidth_hz * std::log2(1.0 + metric.theta);
        }
        return 0.0;
    };
    // Welford
    double mean = 0.0, m2 = 0.0;
    long n = 0;
    for (double s : sinr_values) {
        const double v = value(s);
        ++n;
        const double delta = v - mean;
        mean += delta / n;
        m2 += delta * (v - mean);
    }
    MetricEstimate out;
    out.mean = mean;
    out.n_samples = n;
    out.ci_halfwidth = n > 1 ? 1.96 * std::sqrt(m2 / (n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
    return out;
}

MetricEstimate estimate_metric(const SimulationResult& result, Metric metric, const LinkContext& ctx,
                               const NetworkParams& p) {
    if (result.realizations < 30)
        throw InsufficientSamplesError("estimate_metric: " + std::to_string(result.realizations) +
                                       " realizations, at least 30 needed");
    const auto& samples = result.samples(ctx.direction);
    std::vector<double> values;
    values.reserve(samples.size());
    for (const auto& s : samples) values.push_back(sinr(s, ctx.eff_cross, p.beta, p.N_o));
    return estimate_from_sinr(values, metric, ctx.bandwidth_hz, p.omega1(ctx.direction), p.omega2(ctx.direction));
}

}  // namespace fdcell
