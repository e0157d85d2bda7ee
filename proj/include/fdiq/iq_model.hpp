#pragma once

#include "fdiq/common.hpp"

#include <string_view>

namespace fdiq {

/// How a configured amplitude imbalance in dB becomes the linear alpha used
/// in the (mu, nu) formulas.
///   deviation: alpha = 10^(dB/20) - 1   (0 dB is the balanced chain)
///   ratio:     alpha = 10^(dB/20)
enum class AmplitudeMode { deviation, ratio };

AmplitudeMode parse_amplitude_mode(std::string_view name);
std::string_view to_string(AmplitudeMode mode);

struct IqParams {
    double alpha_db = 0.0;
    double theta_deg = 0.0;
    AmplitudeMode mode = AmplitudeMode::deviation;
};

/// Mixing pair of one transmit or receive chain: s -> mu*s + nu*conj(s).
struct IqCoeffs {
    cplx mu{1.0, 0.0};
    cplx nu{0.0, 0.0};

    /// |mu|^2 + |nu|^2
    double power_gain() const { return std::norm(mu) + std::norm(nu); }
};

struct NodeIqProfile {
    IqCoeffs tx_source;
    IqCoeffs tx_relay;
    IqCoeffs rx_relay;

    static NodeIqProfile ideal() { return {}; }
};

/// Per-chain imbalance parameters of the source transmitter and the relay
/// transceiver.
struct NodeIqParams {
    IqParams tx_source;
    IqParams tx_relay;
    IqParams rx_relay;

    NodeIqProfile coefficients() const;

    // All chains at the same alpha/theta.
    static NodeIqParams uniform(double alpha_db, double theta_deg, AmplitudeMode mode = AmplitudeMode::deviation);
};

/// 2x2 covariance of the stacked receive noise pair [w(k), conj(w(khat))].
struct NoiseCov {
    Eigen::Matrix2cd entries = Eigen::Matrix2cd::Identity();
    double sigma_v2 = 1.0;

    double trace() const { return entries.trace().real(); }
};

/// Composite channel vector of one subcarrier pair (k, khat), ordered
///   [H_SR^a(k), conj(H_SR^b(khat)), H_SR^b(k), conj(H_SR^a(khat)),
///    H_RR^a(k), conj(H_RR^b(khat)), H_RR^b(k), conj(H_RR^a(khat))].
using GammaVec = Eigen::Matrix<cplx, 8, 1>;

double amplitude_linear(double alpha_db, AmplitudeMode mode);

IqCoeffs iq_coefficients(const IqParams& params);

GammaVec composite_pair_channels(cplx h_sr_k, cplx h_sr_khat, cplx h_rr_k, cplx h_rr_khat,
                                 const NodeIqProfile& profile);

NoiseCov noise_cov(const IqCoeffs& rx_relay, double sigma_v2);

} // namespace fdiq
