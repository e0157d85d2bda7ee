#include <doctest.h>

#include "fdiq/allocation.hpp"
#include "fdiq/pilot.hpp"

#include <cmath>
#include <stdexcept>

using namespace fdiq;

namespace {

NodeIqProfile symmetric() { return NodeIqParams::uniform(1.0, 1.0).coefficients(); }

NodeIqProfile asymmetric()
{
    NodeIqParams p = NodeIqParams::uniform(1.0, 1.0);
    p.tx_source.alpha_db = 5.0;
    return p.coefficients();
}

double db_ratio(double a, double b) { return 10.0 * std::log10(a / b); }

} // namespace

TEST_SUITE("allocation")
{
    TEST_CASE("optimal split")
    {
        PowerSplit s = opa(10.0, 1.0);
        CHECK(s.p_source == 5.0);
        CHECK(s.p_relay == 5.0);
        s = opa(8.0, 3.0);
        CHECK(std::abs(s.p_source - 6.0) < 1e-14);
        CHECK(std::abs(s.p_relay - 2.0) < 1e-14);
        s = opa(10.0, 0.01);
        CHECK(std::abs(s.p_source - 0.09900990099009901) < 1e-15);
        CHECK(std::abs(s.p_relay - 9.900990099009901) < 1e-13);
        CHECK(s.p_total == 10.0);
        CHECK_THROWS_AS(opa(0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(opa(1.0, -1.0), std::invalid_argument);
    }

    TEST_CASE("equal split")
    {
        PowerSplit s = epa(10.0);
        CHECK(s.p_source == 5.0);
        CHECK(s.p_relay == 5.0);
        s = epa(1.0);
        CHECK(s.p_source == 0.5);
        CHECK(s.p_source + s.p_relay == 1.0);
        CHECK(split_for(Policy::epa, 3.0, 9.0).p_source == 1.5);
        CHECK(split_for(Policy::opa, 8.0, 3.0).p_source == opa(8.0, 3.0).p_source);
        CHECK_THROWS_AS(epa(-2.0), std::invalid_argument);
    }

    TEST_CASE("policy names")
    {
        CHECK(parse_policy("opa") == Policy::opa);
        CHECK(to_string(Policy::epa) == "epa");
        CHECK_THROWS_AS(parse_policy("waterfill"), std::invalid_argument);
    }

    TEST_CASE("Sum-MSE at fixed powers")
    {
        CHECK(std::abs(sum_mse_given_powers(epa(2.0), 1.0, 4, 2.0) - 2.0) < 1e-15);
        const NoiseCov cw = noise_cov(iq_coefficients({2.0, 2.0, AmplitudeMode::deviation}), 0.4);
        const PowerSplit s{1.5, 0.7, 2.2};
        const double want = (2.0 / 6.0) * (1.0 / 1.5 + 1.0 / (0.09 * 0.7)) * cw.trace();
        CHECK(std::abs(sum_mse_given_powers(s, 0.3, 6, cw) - want) < 1e-13 * want);
        CHECK(std::abs(sum_mse_given_powers(s, 0.3, 6, cw) -
                       analytic_sum_mse(optimal_gram(6, 1.5, 0.7), ScaleB(0.3), cw)) < 1e-13 * want);
    }

    TEST_CASE("optimal split minimizes the fixed-power Sum-MSE")
    {
        Rng rng(3);
        for (int rep = 0; rep < 50; ++rep) {
            const double p = rng.uniform(0.5, 20.0);
            const double rho = std::exp(rng.uniform(-4.0, 4.0));
            const double best = sum_mse_given_powers(opa(p, rho), rho, 4, 2.0);
            for (int i = 1; i < 200; ++i) {
                const double ps = p * i / 200.0;
                CHECK(sum_mse_given_powers({ps, p - ps, p}, rho, 4, 2.0) >= best * (1.0 - 1e-13));
            }
        }
    }

    TEST_CASE("received SNR")
    {
        const SnrPoint g = received_snr({1.0, 1.0, 2.0}, 1.0, NodeIqProfile::ideal(), 1.0);
        CHECK(std::abs(g.gamma_linear - 2.0) < 1e-15);
        CHECK(std::abs(g.gamma_db - 10.0 * std::log10(2.0)) < 1e-13);

        const NodeIqProfile prof = asymmetric();
        const SnrPoint a = received_snr({0.3, 0.9, 1.2}, 0.4, prof, 0.5);
        const SnrPoint b = received_snr({0.9, 2.7, 3.6}, 0.4, prof, 0.5);
        CHECK(std::abs(b.gamma_linear / a.gamma_linear - 3.0) < 1e-13);
        const double want = (prof.tx_source.power_gain() * 0.3 + 0.16 * prof.tx_relay.power_gain() * 0.9) / 0.5;
        CHECK(std::abs(a.gamma_linear - want) < 1e-13 * want);
    }

    TEST_CASE("SNR conversions")
    {
        CHECK(std::abs(SnrPoint::from_db(20.0).gamma_linear - 100.0) < 1e-12);
        CHECK(std::abs(SnrPoint::from_linear(1000.0).gamma_db - 30.0) < 1e-13);
        CHECK_THROWS_AS(SnrPoint::from_linear(0.0), std::invalid_argument);
    }

    TEST_CASE("power for SNR inverts the received SNR")
    {
        const NodeIqProfile prof = asymmetric();
        for (Policy pol : {Policy::opa, Policy::epa}) {
            for (double rho : {1.0 / 32.0, 0.5, 1.0, 7.0}) {
                for (double db : {-5.0, 10.0, 33.0}) {
                    const SnrPoint target = SnrPoint::from_db(db);
                    const PowerSplit s = power_for_snr(target, rho, prof, 0.6, pol);
                    const SnrPoint back = received_snr(s, rho, prof, 0.6);
                    CHECK(std::abs(back.gamma_linear / target.gamma_linear - 1.0) < 1e-12);
                    if (pol == Policy::opa) {
                        CHECK(std::abs(s.p_source / s.p_relay / rho - 1.0) < 1e-12);
                    } else {
                        CHECK(s.p_source == s.p_relay);
                    }
                    CHECK(std::abs(s.p_source + s.p_relay - s.p_total) < 1e-12 * s.p_total);
                }
            }
        }
    }

    TEST_CASE("closed forms agree with the fixed-power chain")
    {
        for (const NodeIqProfile& prof : {symmetric(), asymmetric()}) {
            const NoiseCov cw = noise_cov(prof.rx_relay, 0.9);
            for (double rho : {0.02, 0.3, 1.0, 2.5, 50.0}) {
                for (double db : {0.0, 17.0}) {
                    const SnrPoint g = SnrPoint::from_db(db);
                    for (Policy pol : {Policy::opa, Policy::epa}) {
                        const PowerSplit s = power_for_snr(g, rho, prof, 0.9, pol);
                        const double chain = sum_mse_given_powers(s, rho, 4, cw);
                        const double closed = sum_mse_policy(pol, rho, g, prof, 4);
                        CHECK(std::abs(chain / closed - 1.0) < 1e-10);
                    }
                }
            }
        }
    }

    TEST_CASE("policies coincide at rho one for a symmetric profile")
    {
        const SnrPoint g = SnrPoint::from_db(20.0);
        CHECK(std::abs(sum_mse_opa(1.0, g, symmetric(), 4) - sum_mse_epa(1.0, g, symmetric(), 4)) < 1e-16);
        const double a = sum_mse_opa(0.3, g, symmetric(), 4);
        CHECK(std::abs(sum_mse_opa(0.3, SnrPoint::from_linear(200.0), symmetric(), 4) / a - 0.5) < 1e-13);
    }

    TEST_CASE("symmetric gains")
    {
        const SnrPoint g = SnrPoint::from_db(20.0);
        const NodeIqProfile s = symmetric();
        const double gain_quarter = db_ratio(sum_mse_epa(0.25, g, s, 4), sum_mse_opa(0.25, g, s, 4));
        CHECK(std::abs(gain_quarter - 4.608978427565478) < 1e-12);
        auto formula = [](double r) { return 10.0 * std::log10((2.0 + r * r + 1.0 / (r * r)) / (2.0 + r + 1.0 / r)); };
        CHECK(std::abs(gain_quarter - formula(0.25)) < 1e-12);
        const double gain_tiny = db_ratio(sum_mse_epa(1.0 / 32.0, g, s, 4), sum_mse_opa(1.0 / 32.0, g, s, 4));
        CHECK(std::abs(gain_tiny - 14.792698727078653) < 1e-12);
        CHECK(std::abs(gain_tiny - 14.8) < 0.05);
    }

    TEST_CASE("EPA minus OPA gap for asymmetric transmitters")
    {
        const NodeIqProfile prof = asymmetric();
        const SnrPoint g = SnrPoint::from_db(10.0);
        const double gs = prof.tx_source.power_gain();
        const double gr = prof.tx_relay.power_gain();
        const double c = 4.0 * prof.rx_relay.power_gain() / (g.gamma_linear * 4.0);
        for (double r : {0.05, 0.9, 1.05, 1.1, 1.3, 20.0}) {
            const double gap = sum_mse_epa(r, g, prof, 4) - sum_mse_opa(r, g, prof, 4);
            const double want = c * (r - 1.0) * (r * r * r * gr - gs) / (r * r);
            CHECK(std::abs(gap - want) < 1e-12 * sum_mse_opa(r, g, prof, 4));
        }
        // Inside (1, cbrt(gs/gr)) the equal split wins.
        const double edge = std::cbrt(gs / gr);
        CHECK(edge > 1.16);
        CHECK(sum_mse_epa(1.1, g, prof, 4) < sum_mse_opa(1.1, g, prof, 4));
        CHECK(sum_mse_epa(1.2, g, prof, 4) > sum_mse_opa(1.2, g, prof, 4));
    }

    TEST_CASE("optimal rho")
    {
        CHECK(rho_opt(symmetric()) == 1.0);
        NodeIqProfile four = NodeIqProfile::ideal();
        four.tx_source.mu = cplx(2.0, 0.0);
        CHECK(std::abs(rho_opt(four) - 2.0) < 1e-15);
        CHECK(std::abs(rho_opt(asymmetric()) - 1.2578405320761885) < 1e-13);
    }

    TEST_CASE("global minimum")
    {
        const SnrPoint g = SnrPoint::from_db(13.0);
        const NodeIqProfile prof = asymmetric();
        const double m = sum_mse_global_min(g, prof, 4);
        CHECK(std::abs(m - sum_mse_opa(rho_opt(prof), g, prof, 4)) < 1e-12 * m);
        const SnrPoint g1 = SnrPoint::from_linear(5.0);
        CHECK(std::abs(sum_mse_global_min(g1, NodeIqProfile::ideal(), 4) - 4.0 / (5.0 * 4.0) * 4.0) < 1e-15);
        Rng rng(12);
        for (int i = 0; i < 100; ++i) {
            const double r = std::exp(rng.uniform(-5.0, 5.0));
            CHECK(m <= sum_mse_opa(r, g, prof, 4));
        }
    }

    TEST_CASE("argument checks")
    {
        const SnrPoint g = SnrPoint::from_db(10.0);
        CHECK_THROWS_AS(sum_mse_opa(0.0, g, symmetric(), 4), std::invalid_argument);
        CHECK_THROWS_AS(sum_mse_epa(1.0, g, symmetric(), 0), std::invalid_argument);
        CHECK_THROWS_AS(PowerSplit({2.0, 2.0, 3.0}).validate(), std::invalid_argument);
        CHECK_NOTHROW(PowerSplit({1.0, 1.0, 3.0}).validate());
        CHECK_THROWS_AS(PowerSplit({0.0, 1.0, 3.0}).validate(), std::invalid_argument);
    }
}
