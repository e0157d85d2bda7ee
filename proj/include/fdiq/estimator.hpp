#pragma once

#include "fdiq/channel.hpp"
#include "fdiq/iq_model.hpp"
#include "fdiq/pilot.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fdiq {

/// Stacked pilot-phase observations [y(n,k), conj(y(n,khat))], n = 1..N_P.
struct ReceiveBlock {
    Eigen::VectorXcd y;
};

struct EstimateReport {
    GammaVec gamma_hat;
    double squared_error = 0.0;
    int trials = 1;
};

/// (X (x) I_2) A Gamma without noise.
Eigen::VectorXcd noiseless_received(const PilotMatrix& x, const GammaVec& gamma, const ScaleB& b);

/// Receive-side noise pair per OFDM symbol, mixed from i.i.d. v(n,k), v(n,khat)
/// through the receiver's (mu, nu).
Eigen::VectorXcd synthesize_noise(int n_pilot, const IqCoeffs& rx_relay, double sigma_v2, Rng& rng);

ReceiveBlock simulate_received(const PilotMatrix& x, const GammaVec& gamma, const ScaleB& b,
                               const IqCoeffs& rx_relay, double sigma_v2, Rng& rng);

/// Precomputed LS map A^-1 [(X^H X)^-1 X^H (x) I_2] for one pilot matrix.
class LsEstimator {
public:
    LsEstimator(const PilotMatrix& x, const ScaleB& b);

    GammaVec estimate(const ReceiveBlock& y) const;
    int n_pilot() const { return static_cast<int>(pinv_.cols()); }

private:
    Eigen::MatrixXcd pinv_; // 4 x N_P, (X^H X)^-1 X^H
    Eigen::Vector4d inv_b_;
};

GammaVec ls_estimate(const PilotMatrix& x, const ReceiveBlock& y, const ScaleB& b);

struct MonteCarloOptions {
    ChannelConfig channel{};
    int subcarrier = 2; // 1-based; must not be self-paired
    int workers = 0;    // 0 = hardware concurrency
    // Channel draws use this seed when set; noise always uses the master seed.
    std::optional<std::uint64_t> channel_seed{};
};

struct MonteCarloStats {
    double sum_mse = 0.0;
    double std_error = 0.0;
    GammaVec mean_error = GammaVec::Zero();
    Eigen::Matrix<double, 8, 1> error_std_error = Eigen::Matrix<double, 8, 1>::Zero();
    std::vector<double> squared_errors; // per trial, in trial order
    int trials = 0;
};

/// One pilot-phase trial with fresh channels and noise derived from
/// (seed, trial).
EstimateReport run_trial(const PilotMatrix& x, const ScaleB& b, const NodeIqProfile& profile, double sigma_v2,
                         std::uint64_t seed, std::uint64_t trial, const MonteCarloOptions& opts = {});

MonteCarloStats monte_carlo_sum_mse(const PilotMatrix& x, const ScaleB& b, const NodeIqProfile& profile,
                                    double sigma_v2, int trials, std::uint64_t seed,
                                    const MonteCarloOptions& opts = {});

double empirical_sum_mse(const PilotMatrix& x, const ScaleB& b, const NodeIqProfile& profile, double sigma_v2,
                         int trials, std::uint64_t seed, const MonteCarloOptions& opts = {});

} // namespace fdiq
