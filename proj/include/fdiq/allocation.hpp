#pragma once

#include "fdiq/iq_model.hpp"

#include <string_view>

namespace fdiq {

enum class Policy { opa, epa };

Policy parse_policy(std::string_view name);
std::string_view to_string(Policy policy);

struct PowerSplit {
    double p_source = 0.0;
    double p_relay = 0.0;
    double p_total = 0.0;

    void validate() const;
};

/// Received SNR, carried in both units. Formulas take gamma_linear.
struct SnrPoint {
    double gamma_linear = 1.0;
    double gamma_db = 0.0;

    static SnrPoint from_db(double db);
    static SnrPoint from_linear(double linear);
};

/// P_S = rho P / (1 + rho), P_R = P / (1 + rho).
PowerSplit opa(double p_total, double rho);

PowerSplit epa(double p_total);

PowerSplit split_for(Policy policy, double p_total, double rho);

/// (2 / N_P) (1/P_S + 1/(rho^2 P_R)) tr(C_w)
double sum_mse_given_powers(const PowerSplit& split, double rho, int n_pilot, double noise_trace);
double sum_mse_given_powers(const PowerSplit& split, double rho, int n_pilot, const NoiseCov& cw);

SnrPoint received_snr(const PowerSplit& split, double rho, const NodeIqProfile& profile, double sigma_v2);

/// Inverse of received_snr along the policy's split rule.
PowerSplit power_for_snr(const SnrPoint& target, double rho, const NodeIqProfile& profile, double sigma_v2,
                         Policy policy);

/// Minimum Sum-MSE of the optimal split at fixed received SNR.
double sum_mse_opa(double rho, const SnrPoint& gamma, const NodeIqProfile& profile, int n_pilot);

/// Sum-MSE of the equal split at fixed received SNR.
double sum_mse_epa(double rho, const SnrPoint& gamma, const NodeIqProfile& profile, int n_pilot);

double sum_mse_policy(Policy policy, double rho, const SnrPoint& gamma, const NodeIqProfile& profile, int n_pilot);

/// rho minimizing sum_mse_opa: sqrt(g_tS / g_tR) with g = |mu|^2 + |nu|^2.
double rho_opt(const NodeIqProfile& profile);

double sum_mse_global_min(const SnrPoint& gamma, const NodeIqProfile& profile, int n_pilot);

} // namespace fdiq
