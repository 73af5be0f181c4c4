#pragma once

#include <functional>

#include "fdcell/config.hpp"
#include "fdcell/table.hpp"

namespace fdcell {

/// Executes a run. Numeric failures become NaN cells plus a message in the
/// `error` column; the remaining rows are still produced.
///
/// Columns by mode:
///   analytic  alpha, lambda_per_m2, beta, theta, bw_ul_hz, bw_dl_hz, eff_cross_u, eff_cross_d,
///             ul_<metric>, dl_<metric>..., error
///   sweep     analytic columns plus ul_outage_special, dl_outage_special, dl_outage_erfc,
///             ul_gain_lhs, ul_gain_rhs, ul_gain_satisfied, dl_gain
///   simulate  alpha, lambda_per_m2, beta, theta, direction, metric, mc_mean, mc_ci95, n_samples, error
///   validate  alpha, lambda_per_m2, beta, theta, direction, metric, analytic, mc_mean, mc_ci95,
///             n_samples, within_ci, rel_gap, error
///   pulses    alpha, <pair>_u, <pair>_d for rect_rect, rrc_rrc, sinc_sinc, sinc2_sinc2, sinc2_sinc
Table run(const RunSpec& spec);

/// Calls fn(i) for i in [0, n) on `threads` workers. Exceptions are rethrown
/// after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Unit-annotated column name of a metric ("bep", "outage", "ergodic_rate_bps", "effective_rate_bps").
std::string metric_column(MetricKind k);

}  // namespace fdcell
