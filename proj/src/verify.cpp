#include "fdiq/verify.hpp"

#include "fdiq/allocation.hpp"
#include "fdiq/oracle.hpp"
#include "fdiq/pilot.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace fdiq {

VerifySuite parse_suite(std::string_view name)
{
    if (name == "kkt") return VerifySuite::kkt;
    if (name == "pilot") return VerifySuite::pilot;
    if (name == "power") return VerifySuite::power;
    if (name == "rho") return VerifySuite::rho;
    if (name == "lemma1") return VerifySuite::lemma1;
    if (name == "convexity") return VerifySuite::convexity;
    if (name == "all") return VerifySuite::all;
    throw std::invalid_argument("unknown verification suite '" + std::string(name) + "'");
}

namespace {

CheckResult at_most(std::string name, double measured, double tol)
{
    return {std::move(name), measured <= tol, measured, tol};
}

CheckResult at_least(std::string name, double measured, double tol)
{
    return {std::move(name), measured >= tol, measured, tol};
}

double log_uniform(Rng& rng, double lo, double hi)
{
    return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

NodeIqProfile asymmetric_profile()
{
    NodeIqParams p = NodeIqParams::uniform(1.0, 1.0);
    p.tx_source.alpha_db = 5.0;
    return p.coefficients();
}

void kkt_suite(std::vector<CheckResult>& out, Rng& rng)
{
    double worst_stat = 0.0;
    double worst_slack = 0.0;
    double least_nonopt = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        const double ps = log_uniform(rng, 0.1, 10.0);
        const double pr = log_uniform(rng, 0.1, 10.0);
        const double rho = log_uniform(rng, 1.0 / 32.0, 32.0);
        const int np = 4 + static_cast<int>(rng.uniform(0.0, 13.0));
        const ScaleB b(rho);

        const auto opt = kkt_residual(gram(build_pilot_optimal(np, ps, pr)), b, ps, pr, np);
        worst_stat = std::max(worst_stat, opt.stationarity_residual);
        worst_slack = std::max({worst_slack, opt.slackness_s, opt.slackness_r});

        const auto other = kkt_residual(random_feasible_gram(ps, pr, np, rng), b, ps, pr, np);
        least_nonopt = std::min(least_nonopt, other.stationarity_residual);
    }
    out.push_back(at_most("kkt.optimal_stationarity", worst_stat, 1e-10));
    out.push_back(at_most("kkt.optimal_slackness", worst_slack, 1e-12));
    out.push_back(at_least("kkt.random_feasible_not_stationary", least_nonopt, 1e-3));

    double worst_gap = 0.0;
    double worst_beat = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double ps = log_uniform(rng, 0.2, 5.0);
        const double pr = log_uniform(rng, 0.2, 5.0);
        const double rho = log_uniform(rng, 0.25, 4.0);
        const int np = 4 + i;
        const auto num = numeric_pilot_optimum(ps, pr, rho, np, 20000, rng.engine()());
        const double analytic = pilot_objective(optimal_gram(np, ps, pr), ScaleB(rho));
        worst_gap = std::max(worst_gap, (num.objective - analytic) / analytic);
        worst_beat = std::max(worst_beat, (analytic - num.objective) / analytic);
    }
    out.push_back(at_most("kkt.numeric_optimum_gap", worst_gap, 1e-3));
    out.push_back(at_most("kkt.numeric_never_better", worst_beat, 1e-6));
}

void pilot_suite(std::vector<CheckResult>& out, Rng& rng)
{
    const auto dev = [](const PilotMatrix& x) {
        const GramMatrix d = gram(x) - optimal_gram(x.n_pilot(), x.p_source, x.p_relay);
        return d.cwiseAbs().maxCoeff() / (x.n_pilot() * std::max(x.p_source, x.p_relay));
    };
    out.push_back(at_most("pilot.hadamard4_gram", dev(build_pilot_hadamard4(2.0, 0.5)), 1e-12));
    out.push_back(at_most("pilot.dft_gram", dev(build_pilot_dft(7, 1.5, 3.0, {1, 3, 5, 6})), 1e-12));
    out.push_back(at_most("pilot.conjugate_pair_gram", dev(build_pilot_conjugate_pair(5, 1.0, 4.0)), 1e-12));

    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10000; ++i) {
        const double ps = log_uniform(rng, 0.1, 10.0);
        const double pr = log_uniform(rng, 0.1, 10.0);
        const ScaleB b(log_uniform(rng, 1.0 / 32.0, 32.0));
        const double best = pilot_objective(optimal_gram(4, ps, pr), b);
        const double other = pilot_objective(random_feasible_gram(ps, pr, 4, rng), b);
        worst = std::min(worst, (other - best) / best);
    }
    out.push_back(at_least("pilot.random_feasible_not_better", worst, -1e-12));

    const PilotMatrix x = build_pilot_dft(6, 1.0, 2.0, {1, 2, 4, 6});
    Eigen::MatrixXcd g(6, 6);
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) {
            g(r, c) = rng.complex_normal();
        }
    }
    const Eigen::MatrixXcd u = Eigen::HouseholderQR<Eigen::MatrixXcd>(g).householderQ();
    const PilotMatrix ux{u * x.symbols, x.p_source, x.p_relay};
    const ScaleB b(0.3);
    const double a0 = pilot_objective(gram(x), b);
    const double a1 = pilot_objective(gram(ux), b);
    out.push_back(at_most("pilot.unitary_invariance", std::abs(a1 - a0) / a0, 1e-12));
}

void power_suite(std::vector<CheckResult>& out, Rng& rng)
{
    double worst = 0.0;
    double worst_beat = -std::numeric_limits<double>::infinity();
    const NoiseCov cw = noise_cov(IqCoeffs{}, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double p = log_uniform(rng, 0.1, 100.0);
        const double rho = log_uniform(rng, 1.0 / 32.0, 32.0);
        const double grid = numeric_power_optimum(p, rho, 4, cw, 2000);
        const PowerSplit best = opa(p, rho);
        worst = std::max(worst, std::abs(grid - best.p_source) / p);
        const double at_grid = sum_mse_given_powers({grid, p - grid, p}, rho, 4, cw);
        const double at_opa = sum_mse_given_powers(best, rho, 4, cw);
        worst_beat = std::max(worst_beat, (at_opa - at_grid) / at_opa);
    }
    out.push_back(at_most("power.grid_matches_closed_form", worst, 1e-3));
    out.push_back(at_most("power.closed_form_not_beaten", worst_beat, 1e-12));
}

void rho_suite(std::vector<CheckResult>& out)
{
    const NodeIqProfile sym = NodeIqParams::uniform(1.0, 1.0).coefficients();
    const NodeIqProfile asym = asymmetric_profile();
    const auto grid = log_grid(1.0 / 64.0, 64.0, 97);

    out.push_back(at_most("rho.symmetric_is_one", std::abs(rho_opt(sym) - 1.0), 0.0));
    out.push_back(at_most("rho.symmetric_numeric",
                          std::abs(numeric_rho_optimum(SnrPoint::from_db(20.0), sym, 4, grid) - 1.0), 1e-4));

    double worst = 0.0;
    for (double db : {0.0, 10.0, 20.0, 30.0}) {
        const double num = numeric_rho_optimum(SnrPoint::from_db(db), asym, 4, grid);
        worst = std::max(worst, std::abs(num - rho_opt(asym)) / rho_opt(asym));
    }
    out.push_back(at_most("rho.numeric_matches_closed_form", worst, 1e-3));

    const SnrPoint g = SnrPoint::from_db(15.0);
    const double gm = sum_mse_global_min(g, asym, 4);
    const double at_opt = sum_mse_opa(rho_opt(asym), g, asym, 4);
    out.push_back(at_most("rho.global_min_consistency", std::abs(gm - at_opt) / gm, 1e-12));
}

void lemma1_suite(std::vector<CheckResult>& out, Rng& rng)
{
    double worst_recon = 0.0;
    double least_eig = std::numeric_limits<double>::infinity();
    double worst_alt = 0.0;
    int counterexamples = 0;
    for (int i = 0; i < 1000; ++i) {
        const int n = 1 + i % 8;
        const Eigen::MatrixXcd s = random_hpd(n, rng);
        const Eigen::MatrixXcd p = principal_sqrt_hpd(s);
        worst_recon = std::max(worst_recon, (p * p - s).norm() / s.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> pe(p, Eigen::EigenvaluesOnly);
        least_eig = std::min(least_eig, pe.eigenvalues().minCoeff());

        const auto w = lemma1_uniqueness_witness(s, rng);
        worst_alt = std::max(worst_alt, w.square_error);
        if (w.is_hpd && w.distance_to_root > 1e-8) {
            ++counterexamples;
        }
    }
    out.push_back(at_most("lemma1.reconstruction", worst_recon, 1e-10));
    out.push_back(at_least("lemma1.root_positive_definite", least_eig, std::numeric_limits<double>::min()));
    out.push_back(at_most("lemma1.alternative_roots_square_to_s", worst_alt, 1e-10));
    out.push_back(at_most("lemma1.uniqueness_counterexamples", counterexamples, 0.0));
}

void convexity_suite(std::vector<CheckResult>& out)
{
    const NodeIqProfile sym = NodeIqParams::uniform(1.0, 1.0).coefficients();
    const NodeIqProfile asym = asymmetric_profile();
    const SnrPoint g = SnrPoint::from_db(20.0);
    const auto grid = log_grid(1.0 / 64.0, 64.0, 97);

    double least_curv = std::numeric_limits<double>::infinity();
    double worst_gap = -std::numeric_limits<double>::infinity();
    double worst_sym = 0.0;
    for (const bool symmetric : {true, false}) {
        const NodeIqProfile& prof = symmetric ? sym : asym;
        for (double r : grid) {
            const double h = 1e-3 * r;
            const double f0 = sum_mse_opa(r, g, prof, 4);
            const double curv = (sum_mse_opa(r + h, g, prof, 4) - 2.0 * f0 + sum_mse_opa(r - h, g, prof, 4)) / (h * h);
            least_curv = std::min(least_curv, curv / f0);
            if (symmetric && std::abs(r - 1.0) > 1e-12) {
                worst_gap = std::max(worst_gap, (f0 - sum_mse_epa(r, g, prof, 4)) / f0);
            }
        }
    }
    // Asymmetric chains: EPA - OPA = c (rho - 1)(rho^3 gR - gS) / rho^2, negative between 1 and (gS/gR)^(1/3).
    double worst_identity = 0.0;
    const double gs = asym.tx_source.power_gain();
    const double gr = asym.tx_relay.power_gain();
    const double common = 4.0 * asym.rx_relay.power_gain() / (g.gamma_linear * 4.0);
    for (double r : grid) {
        const double gap = sum_mse_epa(r, g, asym, 4) - sum_mse_opa(r, g, asym, 4);
        const double expect = common * (r - 1.0) * (r * r * r * gr - gs) / (r * r);
        worst_identity = std::max(worst_identity, std::abs(gap - expect) / sum_mse_opa(r, g, asym, 4));
    }
    for (double r : grid) {
        const double a = sum_mse_opa(r, g, sym, 4);
        const double b = sum_mse_opa(1.0 / r, g, sym, 4);
        worst_sym = std::max(worst_sym, std::abs(a - b) / a);
    }
    out.push_back(at_least("convexity.second_difference_positive", least_curv, std::numeric_limits<double>::min()));
    out.push_back(at_most("convexity.opa_strictly_below_epa", worst_gap, -std::numeric_limits<double>::epsilon()));
    out.push_back(at_most("convexity.asymmetric_gap_identity", worst_identity, 1e-12));
    out.push_back(at_most("convexity.symmetric_profile_symmetry", worst_sym, 1e-12));

    const double eq = std::abs(sum_mse_opa(1.0, g, asym, 4) - sum_mse_epa(1.0, g, asym, 4)) / sum_mse_opa(1.0, g, asym, 4);
    out.push_back(at_most("convexity.opa_equals_epa_at_rho_one", eq, 1e-14));

    double worst_stationary = 0.0;
    for (const NodeIqProfile& prof : {sym, asym}) {
        const double r0 = rho_opt(prof);
        const double h = 1e-4 * r0;
        const double d = (sum_mse_opa(r0 + h, g, prof, 4) - sum_mse_opa(r0 - h, g, prof, 4)) / (2.0 * h);
        worst_stationary = std::max(worst_stationary, std::abs(d) * r0 / sum_mse_opa(r0, g, prof, 4));
    }
    out.push_back(at_most("convexity.stationary_at_rho_opt", worst_stationary, 1e-6));
}

} // namespace

std::vector<CheckResult> run_verification(VerifySuite suite, std::uint64_t seed)
{
    std::vector<CheckResult> out;
    Rng rng(seed);
    const bool all = suite == VerifySuite::all;
    if (all || suite == VerifySuite::kkt) kkt_suite(out, rng);
    if (all || suite == VerifySuite::pilot) pilot_suite(out, rng);
    if (all || suite == VerifySuite::power) power_suite(out, rng);
    if (all || suite == VerifySuite::rho) rho_suite(out);
    if (all || suite == VerifySuite::lemma1) lemma1_suite(out, rng);
    if (all || suite == VerifySuite::convexity) convexity_suite(out);
    return out;
}

void print_checks(std::ostream& os, const std::vector<CheckResult>& checks)
{
    for (const auto& c : checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << format_double(c.measured)
           << " tol=" << format_double(c.tolerance) << '\n';
    }
}

} // namespace fdiq
