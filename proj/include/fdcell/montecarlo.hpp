#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fdcell/analytic.hpp"
#include "fdcell/common.hpp"
#include "fdcell/rng.hpp"

namespace fdcell {

struct SimulationConfig {
    double area_side = 20000.0;   // m
    double window_side = 2000.0;  // m, centered collection square
    double ue_intensity = 0.0;    // UE/m^2; 0 selects 50 lambda
    int n_realizations = 2000;
    bool fading = true;           // Rayleigh, unit mean
    std::uint64_t seed = 1;
    int threads = 0;              // 0: hardware concurrency

    void validate(const NetworkParams& p) const;
    double effective_ue_intensity(const NetworkParams& p) const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct NetworkRealization {
    std::vector<Point> bs_points;
    std::vector<Point> ue_points;
    std::vector<int> association;     // UE -> nearest BS
    std::vector<int> scheduled_ue;    // BS -> UE index or -1
    std::vector<double> ul_tx_power;  // BS -> power of its scheduled UE (0 if none)
    std::vector<double> service_distance;
    std::vector<UserClass> user_class;  // BS -> class of its scheduled UE
    int resampled = 0;                  // draws rejected for an empty window
};

/// Draws one realization with a BS inside the window from `stream`.
NetworkRealization sample_realization(const NetworkParams& p, const SimulationConfig& sim, Philox4x32& stream);

/// Received powers of one test link, kept apart so the SINR can be formed
/// for any cross factor and SI level from the same draw.
struct LinkSample {
    double signal = 0.0;
    double intra = 0.0;      // same-direction interference
    double cross = 0.0;      // opposite-direction interference before |C~|^2
    double own_power = 0.0;  // transmit power leaking as self-interference
};

/// signal / (intra + c cross + beta own c + N_o).
double sinr(const LinkSample& s, double eff_cross, double beta, double N_o);

/// UL: every BS in the window with a scheduled UE. DL: every scheduled UE in the window.
std::vector<LinkSample> link_samples(const NetworkRealization& real, Direction d, const NetworkParams& p,
                                     const SimulationConfig& sim, Philox4x32& rng);

/// One SINR draw per test receiver (see link_samples).
std::vector<double> sinr_sample(const NetworkRealization& real, Direction d, const CrossFactors& factors,
                                const NetworkParams& p, const SimulationConfig& sim, Philox4x32& rng);

struct ScheduledRecord {
    double distance = 0.0;
    double power = 0.0;
    bool cell_edge = false;
};

struct SimulationResult {
    std::vector<LinkSample> uplink;
    std::vector<LinkSample> downlink;
    std::vector<ScheduledRecord> scheduled;  // scheduled UEs in the window
    int realizations = 0;
    int resampled = 0;
    std::uint64_t seed = 0;

    const std::vector<LinkSample>& samples(Direction d) const {
        return d == Direction::Uplink ? uplink : downlink;
    }
};

/// Runs sim.n_realizations realizations in parallel. Realization i uses
/// substream i of sim.seed and results are concatenated in index order, so
/// the output does not depend on the thread count.
SimulationResult simulate(const NetworkParams& p, const SimulationConfig& sim);

enum class MetricKind { BEP, Outage, ErgodicRate, EffectiveRate };

struct Metric {
    MetricKind kind = MetricKind::Outage;
    double theta = 1.0;  // Outage and EffectiveRate
};

std::string_view to_string(MetricKind k);

struct MetricEstimate {
    double mean = 0.0;
    double ci_halfwidth = 0.0;  // 95 %, normal approximation
    long n_samples = 0;
};

/// Estimates a metric from the SINR values ctx.eff_cross and p.beta induce
/// on the stored samples. Throws InsufficientSamplesError below 30 realizations
/// or with no samples.
MetricEstimate estimate_metric(const SimulationResult& result, Metric metric, const LinkContext& ctx,
                               const NetworkParams& p);

/// Same, on an explicit SINR list (n_realizations is checked by the caller).
MetricEstimate estimate_from_sinr(const std::vector<double>& sinr_values, Metric metric, double bandwidth_hz,
                                  double omega1, double omega2);

int resolve_threads(int requested);

}  // namespace fdcell
