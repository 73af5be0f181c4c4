// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.
// Usage: acceptance <path-to-fdcell-binary>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fdcell/analytic.hpp"
#include "fdcell/montecarlo.hpp"
#include "fdcell/pulse.hpp"

using namespace fdcell;

namespace {

constexpr double kPi = 3.14159265358979323846;

int failures = 0;

void report(int id, bool pass, const std::string& what) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

void detail(const std::string& line) {
    std::printf("    %s\n", line.c_str());
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const PulseShape kUl = PulseShape::sinc_sq();
const PulseShape kDl = PulseShape::sinc();

DuplexConfig duplex(double alpha) {
    DuplexConfig c;
    c.alpha = alpha;
    return c;
}

LinkContext context(Direction d, double alpha) {
    const DuplexConfig cfg = duplex(alpha);
    return make_link_context(d, cfg, overlap_factors(kUl, kDl, cfg));
}

double alpha_sp() {
    return find_orthogonal_alpha(kUl, kDl, duplex(0.0), 0.0, 1.0);
}

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const double a = alpha_sp();
    const double dt = seconds_since(t0);
    report(1, std::abs(a - 0.2776) <= 0.01 && dt < 1.0,
           fmt("alpha_sp = %.6f (target 0.2776 +- 0.01), %.3f s (limit 1 s)", a, dt));
}

void criterion2() {
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double a = i / 100.0;
        const double got = overlap_factors(PulseShape::rect(), PulseShape::rect(), duplex(a)).eff_cross_u;
        const double want = std::pow(2 * a / (1 + a), 2);
        worst = std::max(worst, std::abs(got - want));
    }
    const double at_one = overlap_factors(PulseShape::rect(), PulseShape::rect(), duplex(1.0)).eff_cross_u;
    report(2, worst <= 1e-8 && std::abs(at_one - 1.0) <= 1e-8,
           fmt("max |eff_cross_u - (2a/(1+a))^2| = %.3g over 101 points (limit 1e-8), eff_cross_u(1) = %.12f", worst,
               at_one));
}

void criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    const NetworkParams p = NetworkParams::table1();
    double worst = 0.0;
    int evaluations = 0;
    for (LTKind k : {LTKind::uu_ccu, LTKind::du_shared, LTKind::uu_ceu, LTKind::dd_shared, LTKind::ud_ccu,
                     LTKind::ud_ceu}) {
        for (double r_o : {50.0, 316.0, 1000.0}) {
            for (int i = 0; i <= 48; ++i) {
                const double s = std::pow(10.0, 3.0 + 0.25 * i);
                const double closed = lt_interference(k, s, p, r_o, kInnerSpec, LtPath::ClosedForm);
                const double general = lt_interference(k, s, p, r_o, kInnerSpec, LtPath::General);
                const double err = closed > 1e-300 ? std::abs(closed - general) / closed
                                                   : (std::abs(general) <= 1e-300 ? 0.0 : 1.0);
                worst = std::max(worst, err);
                ++evaluations;
            }
        }
    }
    const double dt = seconds_since(t0);
    report(3, worst <= 1e-6 && dt < 10.0,
           fmt("max relative gap %.3g over %d evaluations, s in [1e3, 1e15] (limit 1e-6), %.2f s (limit 10 s)", worst,
               evaluations, dt));
}

void criterion4() {
    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        NetworkParams p = NetworkParams::table1();
        p.lambda = std::pow(10.0, -7.0 + 2.0 * u(gen));
        p.rho = std::pow(10.0, -11.0 + 2.0 * u(gen));
        p.P_u_max = std::pow(10.0, -1.0 + 2.0 * u(gen));
        const double r_o = 20.0 + 2000.0 * u(gen);
        const double s = std::pow(r_o, 4.0) * std::pow(10.0, -12.0 + 18.0 * u(gen));
        const double bound = lt_uu_ceu_jensen(s, p, r_o);
        const double exact = lt_interference(LTKind::uu_ceu, s, p, r_o);
        worst = std::max(worst, exact - bound);
        if (bound < exact - 1e-9) ++violations;
    }
    report(4, violations == 0,
           fmt("%d violations in 1000 draws, max (exact - bound) = %.3g (slack 1e-9)", violations, worst));
}

void criterion5() {
    NetworkParams p = NetworkParams::table1();
    p.beta = 0.0;
    double worst = 0.0;
    int bad = 0;
    for (double alpha : {0.25, 0.5, 1.0}) {
        const LinkContext ctx = context(Direction::Downlink, alpha);
        for (double theta : {0.1, 1.0, 10.0}) {
            const double exact = outage_special(theta, ctx, p, SpecialForm::Exact);
            const double approx = outage_special(theta, ctx, p, SpecialForm::ErfcApprox);
            const double rel = std::abs(approx - exact) / exact;
            worst = std::max(worst, rel);
            if (rel > 0.03) {
                ++bad;
                detail(fmt("alpha %.2f theta %-4g integral %.6f closed form %.6f gap %.2f%%", alpha, theta, exact,
                           approx, 100 * rel));
            }
        }
    }
    report(5, bad == 0, fmt("%d of 9 points beyond 3%%, max relative gap %.2f%%", bad, 100 * worst));
}

void criterion6() {
    NetworkParams p = NetworkParams::table1();
    const GainCondition g = ul_gain_condition(1.0, 1.0, 1.0, 0.0, p);
    const double constant = g.rhs / p.lambda;
    report(6, std::abs(constant - 7.1194) <= 1e-4, fmt("pi^2/(2 ln 2) = %.6f (target 7.1194 +- 0.0001)", constant));
}

void criterion7(double a_sp) {
    const auto t0 = std::chrono::steady_clock::now();
    const NetworkParams base = NetworkParams::table1();
    SimulationConfig sim;
    sim.n_realizations = 2000;
    sim.seed = 1;
    const SimulationResult mc = simulate(base, sim);
    int bad = 0;
    int total = 0;
    for (double beta : {0.0, 1e-8}) {
        NetworkParams p = base;
        p.beta = beta;
        for (double alpha : {0.0, a_sp, 0.5, 1.0}) {
            for (Direction d : {Direction::Uplink, Direction::Downlink}) {
                const LinkContext ctx = context(d, alpha);
                for (MetricKind kind : {MetricKind::BEP, MetricKind::Outage}) {
                    const double analytic = kind == MetricKind::BEP ? bep(ctx, p) : outage(1.0, ctx, p);
                    const MetricEstimate e = estimate_metric(mc, {kind, 1.0}, ctx, p);
                    const double gap = std::abs(analytic - e.mean);
                    const bool ok = gap <= e.ci_halfwidth || gap <= 0.1 * std::abs(e.mean);
                    ++total;
                    if (!ok) ++bad;
                    detail(fmt("%s beta %-5g alpha %.4f %-8s %-6s analytic %.5f mc %.5f +- %.5f rel %5.1f%%",
                               ok ? "ok  " : "MISS", beta, alpha, std::string(to_string(d)).c_str(),
                               std::string(to_string(kind)).c_str(), analytic, e.mean, e.ci_halfwidth,
                               100 * gap / std::abs(e.mean)));
                }
            }
        }
    }
    const double dt = seconds_since(t0);
    report(7, bad == 0 && dt < 600.0,
           fmt("%d of %d analytic values outside the 95%% CI and beyond 10%%, 2000 realizations, %.1f s (limit 600 s)",
               bad, total, dt));
}

void criterion8(double a_sp) {
    NetworkParams p = NetworkParams::table1();
    p.beta = 0.0;
    auto eff = [&](Direction d, double alpha, const NetworkParams& q) {
        return rate(RateKind::Effective, 1.0, context(d, alpha), q);
    };
    const double ul_ratio = eff(Direction::Uplink, 1.0, p) / eff(Direction::Uplink, 0.0, p);
    const double dl_ratio = eff(Direction::Downlink, 1.0, p) / eff(Direction::Downlink, 0.0, p);
    const double sp_ratio0 = eff(Direction::Uplink, a_sp, p) / eff(Direction::Uplink, 0.0, p);
    NetworkParams q = NetworkParams::table1();
    q.beta = 1e-8;
    const double sp_ratio8 = eff(Direction::Uplink, a_sp, q) / eff(Direction::Uplink, 0.0, q);
    detail(fmt("(a) UL effective rate alpha 1 / alpha 0 = %.4f (need <= 0.15)", ul_ratio));
    detail(fmt("(b) DL effective rate alpha 1 / alpha 0 = %.4f (need >= 1.5)", dl_ratio));
    detail(fmt("(c) UL effective rate alpha_sp / alpha 0 = %.4f at beta 0 (need > 1), %.4f at beta 1e-8 (need >= 1.5)",
               sp_ratio0, sp_ratio8));
    const bool a = ul_ratio <= 0.15;
    const bool b = dl_ratio >= 1.5;
    const bool c = sp_ratio0 > 1.0 && sp_ratio8 >= 1.5;
    report(8, a && b && c,
           fmt("(a) %s, (b) %s, (c) %s", a ? "pass" : "fail", b ? "pass" : "fail", c ? "pass" : "fail"));
}

// Asymptotic Kolmogorov survival function P{sqrt(n) D > x}.
double kolmogorov_q(double x) {
    if (x < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

void criterion9() {
    const NetworkParams p = NetworkParams::table1();
    constexpr std::size_t n = 10000;
    SimulationConfig sim;
    sim.seed = 9;
    sim.n_realizations = 3000;
    SimulationResult mc = simulate(p, sim);
    while (mc.scheduled.size() < n) {
        sim.n_realizations *= 2;
        mc = simulate(p, sim);
    }
    std::vector<ScheduledRecord> rec(mc.scheduled.begin(), mc.scheduled.begin() + n);

    // Channel inversion: F(x) = 1 - exp(-pi lambda (x/rho)^(2/eta)) below the cap, atom at the cap.
    const double pl = kPi * p.lambda;
    auto cdf = [&](double x) { return 1.0 - std::exp(-pl * std::pow(x / p.rho, 2.0 / p.eta)); };
    const double atom = std::exp(-pl * std::pow(p.P_u_max / p.rho, 2.0 / p.eta));

    std::vector<double> powers;
    std::size_t at_cap = 0;
    for (const auto& r : rec) {
        if (r.power >= p.P_u_max * (1 - 1e-12)) {
            ++at_cap;
        } else {
            powers.push_back(r.power);
        }
    }
    std::sort(powers.begin(), powers.end());
    double D = 0.0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        const double F = cdf(powers[i]);
        D = std::max({D, std::abs(static_cast<double>(i + 1) / n - F), std::abs(static_cast<double>(i) / n - F)});
    }
    const double ks_p = kolmogorov_q(std::sqrt(static_cast<double>(n)) * D);

    const double atom_hat = static_cast<double>(at_cap) / n;
    const double atom_sigma = std::sqrt(atom * (1 - atom) / n);
    const double atom_z = (atom_hat - atom) / atom_sigma;

    const double p_ccu = class_probabilities(p).first;
    const auto ccu = static_cast<double>(std::count_if(rec.begin(), rec.end(), [](auto& r) { return !r.cell_edge; }));
    const double ccu_hat = ccu / n;
    const double ccu_sigma = std::sqrt(p_ccu * (1 - p_ccu) / n);
    const double ccu_z = (ccu_hat - p_ccu) / ccu_sigma;

    detail(fmt("KS D = %.4f, p = %.3g (reject below 0.05)", D, ks_p));
    detail(fmt("point mass at P_u_max: empirical %.4f, model %.4f, z = %.2f", atom_hat, atom, atom_z));
    detail(fmt("P{CCU}: empirical %.4f, model %.4f, z = %.2f", ccu_hat, p_ccu, ccu_z));
    const bool pass = ks_p >= 0.05 && std::abs(atom_z) <= 3.0 && std::abs(ccu_z) <= 3.0;
    report(9, pass, fmt("power law KS p = %.3g, point-mass z = %.2f, P{CCU} z = %.2f (n = %zu)", ks_p, atom_z, ccu_z, n));
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion10(const std::string& cli) {
    const auto dir = std::filesystem::temp_directory_path();
    std::vector<std::string> outputs;
    bool ran = true;
    for (int threads : {1, 4, 1}) {
        const auto out = dir / ("fdcell_accept_" + std::to_string(outputs.size()) + ".csv");
        const std::string cmd =
            "\"" + cli + "\" validate --seed 7 --threads " + std::to_string(threads) + " --out \"" + out.string() + "\"";
        if (std::system(cmd.c_str()) != 0) ran = false;
        outputs.push_back(slurp(out));
        std::filesystem::remove(out);
    }
    const bool same = ran && !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
    report(10, same, fmt("validate CSV at --threads 1, 4, 1: %s (%zu bytes)",
                         !ran ? "command failed" : same ? "byte-identical" : "differs", outputs[0].size()));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <fdcell binary>\n");
        return 2;
    }
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    const double a_sp = alpha_sp();
    criterion7(a_sp);
    criterion8(a_sp);
    criterion9();
    criterion10(argv[1]);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
