// Acceptance run: one PASS/FAIL line per criterion.
//
// Criterion 6 is expected to stay red (the 17 dB reference gain at rho = 1/32
// is above what any IQ profile can reach); it does not fail the process.

#include "fdiq/allocation.hpp"
#include "fdiq/cli.hpp"
#include "fdiq/estimator.hpp"
#include "fdiq/oracle.hpp"
#include "fdiq/pilot.hpp"
#include "fdiq/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace fdiq;

namespace {

struct Verdict {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit_s; // <= 0: none
    std::function<Verdict()> run;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

NodeIqProfile symmetric_profile(AmplitudeMode mode = AmplitudeMode::deviation)
{
    return NodeIqParams::uniform(1.0, 1.0, mode).coefficients();
}

NodeIqProfile asymmetric_profile(AmplitudeMode mode = AmplitudeMode::deviation)
{
    NodeIqParams p = NodeIqParams::uniform(1.0, 1.0, mode);
    p.tx_source.alpha_db = 5.0;
    return p.coefficients();
}

double mid_level(const SweepResult& r, CurveSource src)
{
    const auto [lo, hi] = common_level_range(r, src);
    return std::sqrt(lo * hi);
}

const SweepResult& series_at(const FigureData& f, double value)
{
    for (const auto& s : f.series) {
        if (std::abs(s.fixed_value - value) <= 1e-12 * value) {
            return s.result;
        }
    }
    throw std::logic_error("missing series");
}

Verdict pilot_optimality()
{
    Rng rng(2024);
    double worst_stat = 0.0;
    double worst_slack = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double ps = std::exp(rng.uniform(-3.0, 3.0));
        const double pr = std::exp(rng.uniform(-3.0, 3.0));
        const double rho = std::exp(rng.uniform(-4.0, 4.0));
        const int np = 4 + static_cast<int>(rng.uniform(0.0, 13.0));
        const KktReport k = kkt_residual(optimal_gram(np, ps, pr), ScaleB(rho), ps, pr, np);
        worst_stat = std::max(worst_stat, k.stationarity_residual);
        worst_slack = std::max({worst_slack, k.slackness_s, k.slackness_r});
    }
    double worst_gap = 0.0;
    bool all_converged = true;
    for (int i = 0; i < 5; ++i) {
        const double ps = std::exp(rng.uniform(-1.0, 1.0));
        const double pr = std::exp(rng.uniform(-1.0, 1.0));
        const double rho = std::exp(rng.uniform(-2.0, 2.0));
        const int np = 4 + i;
        const PilotOptimum o = numeric_pilot_optimum(ps, pr, rho, np, 20000, 100 + i);
        const double want = pilot_objective(optimal_gram(np, ps, pr), ScaleB(rho));
        worst_gap = std::max(worst_gap, std::abs(o.objective / want - 1.0));
        all_converged = all_converged && o.converged;
    }
    return {worst_stat < 1e-10 && worst_slack < 1e-12 && worst_gap < 1e-3 && all_converged,
            "max stationarity " + fmt("%.2e", worst_stat) + ", max slackness " + fmt("%.2e", worst_slack) +
                ", numeric optimum gap " + fmt("%.2e", worst_gap) + (all_converged ? "" : ", not converged")};
}

Verdict estimator_consistency()
{
    const NodeIqProfile prof = symmetric_profile();
    const double s2 = 1.0;
    double worst_1e4 = 0.0;
    double worst_1e5 = 0.0;
    std::uint64_t seed = 500;
    for (double rho : {0.25, 1.0, 4.0}) {
        for (double db : {0.0, 15.0, 30.0}) {
            const SnrPoint g = SnrPoint::from_db(db);
            const PowerSplit split = power_for_snr(g, rho, prof, s2, Policy::opa);
            const PilotMatrix x = build_pilot_hadamard4(split.p_source, split.p_relay);
            const ScaleB b(rho);
            const double want = analytic_sum_mse(gram(x), b, noise_cov(prof.rx_relay, s2));
            const double e4 = empirical_sum_mse(x, b, prof, s2, 10000, ++seed);
            const double e5 = empirical_sum_mse(x, b, prof, s2, 100000, ++seed);
            worst_1e4 = std::max(worst_1e4, std::abs(e4 / want - 1.0));
            worst_1e5 = std::max(worst_1e5, std::abs(e5 / want - 1.0));
        }
    }
    return {worst_1e4 < 0.03 && worst_1e5 < 0.01,
            "9 points, worst gap " + fmt("%.4f", worst_1e4) + " at 1e4 trials, " + fmt("%.4f", worst_1e5) +
                " at 1e5 trials"};
}

Verdict power_split()
{
    Rng rng(77);
    double worst = 0.0;
    const NoiseCov cw = noise_cov(symmetric_profile().rx_relay, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double p = std::exp(rng.uniform(-2.0, 4.0));
        const double rho = std::exp(rng.uniform(-4.0, 4.0));
        const double grid = numeric_power_optimum(p, rho, 4, cw, 999);
        worst = std::max(worst, std::abs(grid - rho * p / (1.0 + rho)) / p);
    }
    return {worst <= 1e-3, "20 cases, worst |grid - closed form| / P = " + fmt("%.2e", worst)};
}

Verdict rho_optimum()
{
    const auto grid = log_grid(1.0 / 64.0, 64.0, 97);
    const SnrPoint g = SnrPoint::from_db(20.0);
    const bool sym_exact = rho_opt(symmetric_profile()) == 1.0;

    std::vector<NodeIqProfile> profiles{symmetric_profile(), asymmetric_profile()};
    Rng rng(8);
    for (int i = 0; i < 8; ++i) {
        NodeIqParams p;
        p.tx_source = {rng.uniform(0.0, 6.0), rng.uniform(-5.0, 5.0), AmplitudeMode::deviation};
        p.tx_relay = {rng.uniform(0.0, 6.0), rng.uniform(-5.0, 5.0), AmplitudeMode::deviation};
        p.rx_relay = {rng.uniform(0.0, 6.0), rng.uniform(-5.0, 5.0), AmplitudeMode::deviation};
        profiles.push_back(p.coefficients());
    }
    double worst = 0.0;
    double least_curv = std::numeric_limits<double>::infinity();
    for (const auto& prof : profiles) {
        worst = std::max(worst, std::abs(numeric_rho_optimum(g, prof, 4, grid) / rho_opt(prof) - 1.0));
        for (double r : grid) {
            const double h = 1e-3 * r;
            const double f0 = sum_mse_opa(r, g, prof, 4);
            const double c = sum_mse_opa(r + h, g, prof, 4) - 2.0 * f0 + sum_mse_opa(r - h, g, prof, 4);
            least_curv = std::min(least_curv, c / (h * h) / f0);
        }
    }
    return {sym_exact && worst < 1e-3 && least_curv > 0.0,
            std::string("symmetric optimum ") + (sym_exact ? "exactly 1" : "not 1") + ", worst numeric gap " +
                fmt("%.2e", worst) + ", least scaled curvature " + fmt("%.2e", least_curv)};
}

Verdict symmetric_gains()
{
    const FigureData analytic = reproduce_figure(6);
    const double g_quarter = snr_gain(series_at(analytic, 0.25), mid_level(series_at(analytic, 0.25), CurveSource::analytic));
    const double g_tiny =
        snr_gain(series_at(analytic, 1.0 / 32.0), mid_level(series_at(analytic, 1.0 / 32.0), CurveSource::analytic));
    const double g_one = snr_gain(series_at(analytic, 1.0), mid_level(series_at(analytic, 1.0), CurveSource::analytic));
    const bool analytic_ok = std::abs(g_quarter - 4.61) <= 0.1 && std::abs(g_tiny - 14.8) <= 0.1 &&
                             std::abs(g_one) <= 1e-9;

    FigureOverrides ov;
    ov.trials = 2000;
    ov.seed = 6;
    const FigureData mc = reproduce_figure(6, ov);
    double worst_point_db = 0.0;
    double worst_gain_db = 0.0;
    for (const auto& s : mc.series) {
        for (const auto& row : s.result.rows) {
            worst_point_db =
                std::max(worst_point_db, std::abs(10.0 * std::log10(*row.sum_mse_empirical / row.sum_mse_analytic)));
        }
        const double ga = snr_gain(s.result, mid_level(s.result, CurveSource::analytic), CurveSource::analytic);
        const double ge = snr_gain(s.result, mid_level(s.result, CurveSource::empirical), CurveSource::empirical);
        worst_gain_db = std::max(worst_gain_db, std::abs(ge - ga));
    }
    return {analytic_ok && worst_point_db <= 1.0 && worst_gain_db <= 1.0,
            "gains " + fmt("%.3f", g_quarter) + " dB at 1/4, " + fmt("%.3f", g_tiny) + " dB at 1/32, " +
                fmt("%.1e", g_one) + " dB at 1; Monte Carlo worst point " + fmt("%.3f", worst_point_db) +
                " dB, worst gain offset " + fmt("%.3f", worst_gain_db) + " dB"};
}

double asym_gain(AmplitudeMode mode, int fig, double rho)
{
    FigureOverrides ov;
    ov.mode = mode;
    ov.series_values = std::vector<double>{rho};
    const FigureData f = reproduce_figure(fig, ov);
    const SweepResult& r = f.series.front().result;
    return snr_gain(r, mid_level(r, CurveSource::analytic), CurveSource::analytic);
}

Verdict asymmetric_gains()
{
    struct Point {
        int fig;
        double rho;
        const char* label;
        double reference;
    };
    const Point points[] = {{3, 0.25, "1/4", 5.0}, {3, 1.0 / 32.0, "1/32", 17.0}, {4, 8.0, "8", 7.0}, {4, 32.0, "32", 16.0}};
    bool ok = true;
    std::string detail;
    std::string missed;
    for (const auto& p : points) {
        const double dev = asym_gain(AmplitudeMode::deviation, p.fig, p.rho);
        const double rat = asym_gain(AmplitudeMode::ratio, p.fig, p.rho);
        const bool hit = std::abs(dev - p.reference) <= 1.5;
        ok = ok && hit;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += std::string("rho=") + p.label + " " + fmt("%.2f", dev) + " dB vs " + fmt("%.0f", p.reference) +
                  (hit ? "" : " MISS");
        if (!hit) {
            // EPA/OPA is a linear-fractional map of gS/gR; its supremum sits at gS/gR -> 0 or infinity.
            const double r = p.rho;
            const double bound = 10.0 * std::log10(std::max((1.0 + r * r) / (r * (1.0 + r)), (1.0 + r * r) / (1.0 + r)));
            missed += std::string(" rho=") + p.label + ": ratio-mode conversion gives " + fmt("%.2f", rat) +
                      " dB; supremum over all IQ profiles is " + fmt("%.2f", bound) + " dB;";
        }
    }
    if (!missed.empty()) {
        detail += " | conversion-mode caveat (deviation default):" + missed;
    }
    return {ok, detail};
}

Verdict rho_symmetry()
{
    FigureOverrides ov;
    ov.axis_values = log_grid(1.0 / 64.0, 64.0, 1001);
    const FigureData dense = reproduce_figure(5, ov);
    const FigureData preset = reproduce_figure(5);
    double worst_sym = 0.0;
    double worst_order = -std::numeric_limits<double>::infinity();
    for (const FigureData* f : {&dense, &preset}) {
        for (const auto& s : f->series) {
            const auto o = s.result.curve(Policy::opa);
            const auto e = s.result.curve(Policy::epa);
            for (std::size_t i = 0; i < o.size(); ++i) {
                const double a = o[i].sum_mse_analytic;
                const double b = o[o.size() - 1 - i].sum_mse_analytic;
                worst_sym = std::max(worst_sym, std::abs(a - b) / a);
                worst_order = std::max(worst_order, (a - e[i].sum_mse_analytic) / a);
            }
        }
    }
    return {worst_sym <= 1e-12 && worst_order <= 0.0,
            "worst |f(rho) - f(1/rho)| / f = " + fmt("%.2e", worst_sym) + ", max (OPA - EPA) / OPA = " +
                fmt("%.2e", worst_order)};
}

Verdict principal_root()
{
    Rng rng(88);
    double worst = 0.0;
    double least_eig = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
        const int n = 1 + i % 8;
        const Eigen::MatrixXcd s = random_hpd(n, rng);
        const Eigen::MatrixXcd p = principal_sqrt_hpd(s);
        worst = std::max(worst, (p * p - s).norm() / s.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p);
        least_eig = std::min(least_eig, es.eigenvalues().minCoeff());
    }
    return {worst < 1e-10 && least_eig > 0.0,
            "1000 matrices up to 8x8, worst reconstruction " + fmt("%.2e", worst) + ", least root eigenvalue " +
                fmt("%.2e", least_eig)};
}

Verdict worker_determinism()
{
    auto sweep = [](const char* workers) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = dispatch({"sweep", "--trials", "2000", "--seed", "7", "--rho", "0.25", "--set",
                                   "sweep.values=[0,10,20,30]", "--workers", workers},
                                  out, err);
        return std::make_pair(code, out.str());
    };
    const auto one = sweep("1");
    const auto eight = sweep("8");
    const bool same = one.first == 0 && eight.first == 0 && one.second == eight.second;
    return {same, std::to_string(one.second.size()) + " bytes, " + (same ? "identical" : "different")};
}

} // namespace

int main()
{
    const std::set<int> expected_red{6};
    const std::vector<Criterion> criteria{
        {1, "pilot Gram optimality (KKT + numeric optimum)", 60.0, pilot_optimality},
        {2, "LS estimator Monte Carlo consistency", 120.0, estimator_consistency},
        {3, "optimal source/relay power split", 5.0, power_split},
        {4, "optimal rho and convexity", 10.0, rho_optimum},
        {5, "symmetric-profile SNR gains", 180.0, symmetric_gains},
        {6, "asymmetric-profile SNR gains", 0.0, asymmetric_gains},
        {7, "rho <-> 1/rho symmetry and OPA <= EPA", 0.0, rho_symmetry},
        {8, "principal Hermitian square root", 5.0, principal_root},
        {9, "worker-count determinism of sweep", 0.0, worker_determinism},
    };

    int unexpected = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool passed = v.passed;
        std::string timing = fmt("%.2f s", secs);
        if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
            passed = false;
            timing += " over limit " + fmt("%.0f s", c.time_limit_s);
        }
        const bool red_ok = expected_red.count(c.id) != 0;
        std::cout << (passed ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " -- " << v.detail
                  << " (" << timing << ")" << (!passed && red_ok ? " [known unattainable]" : "") << std::endl;
        if (!passed && !red_ok) {
            ++unexpected;
        }
        if (passed && red_ok) {
            std::cout << "NOTE criterion " << c.id << " was expected to fail and passed; update the record\n";
            ++unexpected;
        }
    }
    return unexpected == 0 ? 0 : 1;
}
