#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "fdcell/error.hpp"
#include "fdcell/montecarlo.hpp"

using namespace fdcell;

namespace {

SimulationConfig small_sim() {
    SimulationConfig s;
    s.area_side = 5000.0;
    s.window_side = 2000.0;
    s.n_realizations = 40;
    s.seed = 99;
    return s;
}

NetworkParams dense() {
    NetworkParams p = NetworkParams::table1();
    p.lambda = 1e-5;
    return p;
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
    using B = Philox4x32::Block;
    CHECK(Philox4x32::bijection(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::bijection(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::bijection(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("Philox streams") {
    Philox4x32 a(5, 0), b(5, 0), c(5, 1), d(6, 0);
    const auto first = Philox4x32::bijection({0, 0, 0, 0}, {5, 0});
    for (int i = 0; i < 4; ++i) CHECK(a() == first[i]);
    for (int i = 0; i < 4; ++i) b();
    std::set<std::uint32_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a(), y = b(), z = c(), w = d();
        CHECK(x == y);
        seen.insert(x);
        CHECK((x != z || x != w));
    }
    CHECK(seen.size() > 990);

    Philox4x32 u(1, 2);
    double sum = 0.0, sum_exp = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = u.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        sum += x;
        sum_exp += u.exponential();
    }
    CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(sum_exp / n - 1.0) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(u.uniform_open_zero() > 0.0);
}

TEST_CASE("simulation configuration checks") {
    const NetworkParams p = NetworkParams::table1();
    SimulationConfig s;
    CHECK_NOTHROW(s.validate(p));
    CHECK(s.effective_ue_intensity(p) == 50.0 * p.lambda);
    s.window_side = s.area_side;
    CHECK_THROWS_AS(s.validate(p), DomainError);
    s = SimulationConfig{};
    s.ue_intensity = 10.0 * p.lambda;
    CHECK_THROWS_AS(s.validate(p), DomainError);
}

TEST_CASE("BS count is Poisson with mean lambda * area") {
    const NetworkParams p = NetworkParams::table1();
    SimulationConfig sim;
    sim.ue_intensity = 20.0 * p.lambda;
    const int seeds = 200;
    double sum = 0.0;
    for (int i = 0; i < seeds; ++i) {
        Philox4x32 rng(1234, static_cast<std::uint64_t>(i));
        sum += static_cast<double>(sample_realization(p, sim, rng).bs_points.size());
    }
    const double mean = p.lambda * sim.area_side * sim.area_side;
    CHECK(std::abs(sum / seeds - mean) < 3.0 * std::sqrt(mean / seeds));
}

TEST_CASE("association, scheduling and power control") {
    const NetworkParams p = dense();
    const SimulationConfig sim = small_sim();
    Philox4x32 rng(7, 0);
    const NetworkRealization real = sample_realization(p, sim, rng);
    REQUIRE(real.bs_points.size() > 100);

    for (std::size_t u = 0; u < real.ue_points.size(); ++u) {
        int best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < real.bs_points.size(); ++b) {
            const double dx = real.ue_points[u].x - real.bs_points[b].x;
            const double dy = real.ue_points[u].y - real.bs_points[b].y;
            if (dx * dx + dy * dy < best_d2) {
                best_d2 = dx * dx + dy * dy;
                best = static_cast<int>(b);
            }
        }
        if (real.association[u] != best) {
            FAIL("UE " << u << " not associated with its nearest BS");
            break;
        }
    }

    std::vector<int> members(real.bs_points.size(), 0);
    for (int b : real.association) ++members[static_cast<std::size_t>(b)];
    const double R = p.R_M();
    for (std::size_t b = 0; b < real.bs_points.size(); ++b) {
        const int u = real.scheduled_ue[b];
        CHECK((u >= 0) == (members[b] > 0));
        if (u < 0) continue;
        CHECK(real.association[static_cast<std::size_t>(u)] == static_cast<int>(b));
        CHECK(real.ul_tx_power[b] <= p.P_u_max);
        const double r = real.service_distance[b];
        CHECK(real.ul_tx_power[b] == doctest::Approx(std::min(p.rho * std::pow(r, 4.0), p.P_u_max)));
        CHECK((real.user_class[b] == UserClass::CellEdge) == (r > R));
    }

    NetworkParams uncapped = p;
    uncapped.P_u_max = std::numeric_limits<double>::infinity();
    Philox4x32 rng2(7, 0);
    const NetworkRealization all_ccu = sample_realization(uncapped, sim, rng2);
    for (std::size_t b = 0; b < all_ccu.bs_points.size(); ++b)
        if (all_ccu.scheduled_ue[b] >= 0) CHECK(all_ccu.user_class[b] == UserClass::CellCenter);
}

TEST_CASE("single-link SINR") {
    NetworkParams p = NetworkParams::table1();
    p.beta = 0.0;
    SimulationConfig sim = small_sim();
    NetworkRealization real;
    real.bs_points = {{0.0, 0.0}};
    real.ue_points = {{100.0, 0.0}};
    real.association = {0};
    real.scheduled_ue = {0};
    real.service_distance = {100.0};
    real.ul_tx_power = {p.rho * 1e8};
    real.user_class = {UserClass::CellCenter};

    sim.fading = false;
    Philox4x32 rng(1, 0);
    const CrossFactors f;
    const auto ul = sinr_sample(real, Direction::Uplink, f, p, sim, rng);
    REQUIRE(ul.size() == 1);
    CHECK(ul[0] == doctest::Approx(p.rho / p.N_o).epsilon(1e-12));

    sim.fading = true;
    Philox4x32 a(3, 0), b(3, 0);
    const auto s = link_samples(real, Direction::Downlink, p, sim, a);
    const double h = b.exponential();
    REQUIRE(s.size() == 1);
    CHECK(sinr(s[0], 0.7, 0.0, p.N_o) == doctest::Approx(p.P_d * h * 1e-8 / p.N_o).epsilon(1e-12));
}

TEST_CASE("without leakage the SINR is the half-duplex SINR") {
    NetworkParams p = dense();
    p.beta = 0.0;
    SimulationConfig sim = small_sim();
    sim.fading = false;
    Philox4x32 rng(21, 0);
    const NetworkRealization real = sample_realization(p, sim, rng);
    CrossFactors none;
    none.eff_cross_u = none.eff_cross_d = 0.0;
    Philox4x32 r1(1, 0);
    const auto ul = sinr_sample(real, Direction::Uplink, none, p, sim, r1);

    std::vector<double> expected;
    const double half = sim.window_side / 2;
    for (std::size_t b = 0; b < real.bs_points.size(); ++b) {
        const int j = real.scheduled_ue[b];
        const Point& rx = real.bs_points[b];
        if (j < 0 || std::abs(rx.x) >= half || std::abs(rx.y) >= half) continue;
        double interference = 0.0;
        for (std::size_t m = 0; m < real.bs_points.size(); ++m) {
            const int k = real.scheduled_ue[m];
            if (m == b || k < 0) continue;
            const double d = std::hypot(real.ue_points[k].x - rx.x, real.ue_points[k].y - rx.y);
            interference += real.ul_tx_power[m] * std::pow(d, -p.eta);
        }
        const double signal = real.ul_tx_power[b] * std::pow(real.service_distance[b], -p.eta);
        expected.push_back(signal / (interference + p.N_o));
    }
    REQUIRE(ul.size() == expected.size());
    for (std::size_t i = 0; i < ul.size(); ++i) CHECK(ul[i] == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("metric estimation") {
    const std::vector<double> ones(100, 1.0);
    const auto outage = estimate_from_sinr(ones, Metric{MetricKind::Outage, 1.0}, 1e6, 0.5, 1.0);
    CHECK(outage.mean == 0.0);
    CHECK(outage.ci_halfwidth == 0.0);
    CHECK(outage.n_samples == 100);
    CHECK(estimate_from_sinr(ones, Metric{MetricKind::EffectiveRate, 1.0}, 1e6, 0.5, 1.0).mean == 1e6);
    CHECK(estimate_from_sinr(ones, Metric{MetricKind::ErgodicRate, 1.0}, 2e6, 0.5, 1.0).mean == 2e6);
    const std::vector<double> inf(50, std::numeric_limits<double>::infinity());
    CHECK(estimate_from_sinr(inf, Metric{MetricKind::BEP, 1.0}, 1e6, 0.5, 1.0).mean == 0.0);
    CHECK_THROWS_AS(estimate_from_sinr({}, Metric{MetricKind::BEP, 1.0}, 1e6, 0.5, 1.0), InsufficientSamplesError);

    std::vector<double> mixed;
    for (int i = 0; i < 1000; ++i) mixed.push_back(i % 4 == 0 ? 0.1 : 10.0);
    const auto est = estimate_from_sinr(mixed, Metric{MetricKind::Outage, 1.0}, 1e6, 0.5, 1.0);
    const double m = 0.25;
    const double var = m * (1 - m) * 1000.0 / 999.0;
    CHECK(est.mean == doctest::Approx(m).epsilon(1e-12));
    CHECK(est.ci_halfwidth == doctest::Approx(1.96 * std::sqrt(var / 1000.0)).epsilon(1e-10));

    SimulationResult few;
    few.realizations = 29;
    few.uplink.resize(100);
    LinkContext ctx;
    CHECK_THROWS_AS(estimate_metric(few, Metric{}, ctx, NetworkParams::table1()), InsufficientSamplesError);
}

TEST_CASE("simulation is deterministic across thread counts") {
    const NetworkParams p = dense();
    SimulationConfig sim = small_sim();
    sim.threads = 1;
    const SimulationResult a = simulate(p, sim);
    sim.threads = 3;
    const SimulationResult b = simulate(p, sim);
    const SimulationResult c = simulate(p, sim);
    REQUIRE(a.uplink.size() == b.uplink.size());
    REQUIRE(a.downlink.size() == b.downlink.size());
    for (std::size_t i = 0; i < a.uplink.size(); ++i) {
        CHECK(a.uplink[i].signal == b.uplink[i].signal);
        CHECK(a.uplink[i].intra == b.uplink[i].intra);
        CHECK(a.uplink[i].cross == c.uplink[i].cross);
    }
    for (std::size_t i = 0; i < a.downlink.size(); ++i) CHECK(a.downlink[i].intra == b.downlink[i].intra);
    CHECK(a.realizations == 40);
    CHECK(a.scheduled.size() == b.scheduled.size());

    sim.seed = 100;
    const SimulationResult d = simulate(p, sim);
    CHECK((d.uplink.size() != a.uplink.size() || d.uplink[0].signal != a.uplink[0].signal));
}

TEST_CASE("empirical UL outage grows with the cross-mode factor") {
    const NetworkParams p = dense();
    const SimulationResult r = simulate(p, small_sim());
    double prev = -1.0;
    for (double c : {0.0, 1e-3, 0.01, 0.1, 0.5, 1.0}) {
        LinkContext ctx;
        ctx.eff_cross = c;
        const auto est = estimate_metric(r, Metric{MetricKind::Outage, 1.0}, ctx, p);
        CHECK(est.mean >= prev);
        CHECK(est.ci_halfwidth >= 0.0);
        prev = est.mean;
    }
}
