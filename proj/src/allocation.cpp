#include "fdiq/allocation.hpp"

#include <cmath>
#include <string>

namespace fdiq {

Policy parse_policy(std::string_view name)
{
    if (name == "opa") {
        return Policy::opa;
    }
    if (name == "epa") {
        return Policy::epa;
    }
    throw std::invalid_argument("unknown allocation policy '" + std::string(name) + "' (expected opa|epa)");
}

std::string_view to_string(Policy policy)
{
    return policy == Policy::opa ? "opa" : "epa";
}

void PowerSplit::validate() const
{
    require(p_source > 0.0 && p_relay > 0.0, "powers must be positive");
    require(p_source + p_relay <= p_total * (1.0 + 1e-12), "split exceeds the total power");
}

SnrPoint SnrPoint::from_db(double db)
{
    require(std::isfinite(db), "SNR must be finite");
    return {std::pow(10.0, db / 10.0), db};
}

SnrPoint SnrPoint::from_linear(double linear)
{
    require(std::isfinite(linear) && linear > 0.0, "SNR must be positive");
    return {linear, 10.0 * std::log10(linear)};
}

namespace {

void check_rho(double rho)
{
    require(std::isfinite(rho) && rho > 0.0, "rho must be positive");
}

void check_gamma(const SnrPoint& gamma)
{
    require(std::isfinite(gamma.gamma_linear) && gamma.gamma_linear > 0.0, "SNR must be positive");
}

void check_pilots(int n_pilot)
{
    require(n_pilot >= 4, "n_pilot must be >= 4");
}

// 4 g_rR / (gamma N_P)
double common_factor(const SnrPoint& gamma, const NodeIqProfile& profile, int n_pilot)
{
    check_gamma(gamma);
    check_pilots(n_pilot);
    return 4.0 * profile.rx_relay.power_gain() / (gamma.gamma_linear * n_pilot);
}

} // namespace

PowerSplit opa(double p_total, double rho)
{
    require(std::isfinite(p_total) && p_total > 0.0, "total power must be positive");
    check_rho(rho);
    return {rho * p_total / (1.0 + rho), p_total / (1.0 + rho), p_total};
}

PowerSplit epa(double p_total)
{
    require(std::isfinite(p_total) && p_total > 0.0, "total power must be positive");
    return {0.5 * p_total, 0.5 * p_total, p_total};
}

PowerSplit split_for(Policy policy, double p_total, double rho)
{
    return policy == Policy::opa ? opa(p_total, rho) : epa(p_total);
}

double sum_mse_given_powers(const PowerSplit& split, double rho, int n_pilot, double noise_trace)
{
    split.validate();
    check_rho(rho);
    check_pilots(n_pilot);
    return 2.0 / n_pilot * (1.0 / split.p_source + 1.0 / (rho * rho * split.p_relay)) * noise_trace;
}

double sum_mse_given_powers(const PowerSplit& split, double rho, int n_pilot, const NoiseCov& cw)
{
    return sum_mse_given_powers(split, rho, n_pilot, cw.trace());
}

SnrPoint received_snr(const PowerSplit& split, double rho, const NodeIqProfile& profile, double sigma_v2)
{
    check_rho(rho);
    require(sigma_v2 > 0.0, "sigma_v2 must be positive");
    const double signal =
        profile.tx_source.power_gain() * split.p_source + rho * rho * profile.tx_relay.power_gain() * split.p_relay;
    return SnrPoint::from_linear(signal / sigma_v2);
}

PowerSplit power_for_snr(const SnrPoint& target, double rho, const NodeIqProfile& profile, double sigma_v2,
                         Policy policy)
{
    check_gamma(target);
    check_rho(rho);
    require(sigma_v2 > 0.0, "sigma_v2 must be positive");
    const double gs = profile.tx_source.power_gain();
    const double gr = profile.tx_relay.power_gain();
    const double need = target.gamma_linear * sigma_v2;
    // received_snr is linear in P along either split rule.
    const double per_unit =
        policy == Policy::opa ? (rho * gs + rho * rho * gr) / (1.0 + rho) : 0.5 * (gs + rho * rho * gr);
    return split_for(policy, need / per_unit, rho);
}

double sum_mse_opa(double rho, const SnrPoint& gamma, const NodeIqProfile& profile, int n_pilot)
{
    check_rho(rho);
    const double gs = profile.tx_source.power_gain();
    const double gr = profile.tx_relay.power_gain();
    return common_factor(gamma, profile, n_pilot) * ((1.0 + 1.0 / rho) * gs + (1.0 + rho) * gr);
}

double sum_mse_epa(double rho, const SnrPoint& gamma, const NodeIqProfile& profile, int n_pilot)
{
    check_rho(rho);
    const double gs = profile.tx_source.power_gain();
    // Relay-side term uses the relay transmitter's chain.
    const double gr = profile.tx_relay.power_gain();
    const double r2 = rho * rho;
    return common_factor(gamma, profile, n_pilot) * ((1.0 + 1.0 / r2) * gs + (1.0 + r2) * gr);
}

double sum_mse_policy(Policy policy, double rho, const SnrPoint& gamma, const NodeIqProfile& profile, int n_pilot)
{
    return policy == Policy::opa ? sum_mse_opa(rho, gamma, profile, n_pilot)
                                 : sum_mse_epa(rho, gamma, profile, n_pilot);
}

double rho_opt(const NodeIqProfile& profile)
{
    return std::sqrt(profile.tx_source.power_gain() / profile.tx_relay.power_gain());
}

double sum_mse_global_min(const SnrPoint& gamma, const NodeIqProfile& profile, int n_pilot)
{
    const double root = std::sqrt(profile.tx_source.power_gain()) + std::sqrt(profile.tx_relay.power_gain());
    return common_factor(gamma, profile, n_pilot) * root * root;
}

} // namespace fdiq
