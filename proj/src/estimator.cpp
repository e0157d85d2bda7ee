#include "fdiq/estimator.hpp"

#include "fdiq/parallel.hpp"

#include <cmath>

namespace fdiq {

namespace {

constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

void check_block(const PilotMatrix& x)
{
    if (x.symbols.cols() != 4 || x.n_pilot() < 1) {
        throw std::invalid_argument("pilot matrix must be N_P x 4");
    }
}

} // namespace

Eigen::VectorXcd noiseless_received(const PilotMatrix& x, const GammaVec& gamma, const ScaleB& b)
{
    check_block(x);
    const Eigen::Vector4d bd = b.diagonal();
    const int np = x.n_pilot();
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(2 * np);
    for (int n = 0; n < np; ++n) {
        for (int i = 0; i < 4; ++i) {
            const cplx s = x.symbols(n, i) * bd(i);
            y(2 * n) += s * gamma(2 * i);
            y(2 * n + 1) += s * gamma(2 * i + 1);
        }
    }
    return y;
}

Eigen::VectorXcd synthesize_noise(int n_pilot, const IqCoeffs& rx, double sigma_v2, Rng& rng)
{
    require(sigma_v2 >= 0.0 && std::isfinite(sigma_v2), "sigma_v2 must be non-negative");
    Eigen::VectorXcd w(2 * n_pilot);
    for (int n = 0; n < n_pilot; ++n) {
        const cplx v_k = rng.complex_normal(sigma_v2);
        const cplx v_khat = rng.complex_normal(sigma_v2);
        w(2 * n) = rx.mu * v_k + rx.nu * std::conj(v_khat);
        w(2 * n + 1) = std::conj(rx.mu) * std::conj(v_khat) + std::conj(rx.nu) * v_k;
    }
    return w;
}

ReceiveBlock simulate_received(const PilotMatrix& x, const GammaVec& gamma, const ScaleB& b,
                               const IqCoeffs& rx_relay, double sigma_v2, Rng& rng)
{
    ReceiveBlock block;
    block.y = noiseless_received(x, gamma, b) + synthesize_noise(x.n_pilot(), rx_relay, sigma_v2, rng);
    return block;
}

LsEstimator::LsEstimator(const PilotMatrix& x, const ScaleB& b)
{
    check_block(x);
    const GramMatrix y = gram(x);
    Eigen::LLT<GramMatrix> llt(y);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14)) {
        throw RankDeficientError("pilot Gram matrix is singular; LS estimate undefined");
    }
    pinv_ = llt.solve(Eigen::MatrixXcd(x.symbols.adjoint()));
    inv_b_ = b.diagonal().cwiseInverse();
}

GammaVec LsEstimator::estimate(const ReceiveBlock& block) const
{
    const int np = n_pilot();
    if (block.y.size() != 2 * np) {
        throw std::invalid_argument("receive block length must be 2 * n_pilot");
    }
    GammaVec g = GammaVec::Zero();
    for (int i = 0; i < 4; ++i) {
        cplx even{0.0, 0.0};
        cplx odd{0.0, 0.0};
        for (int n = 0; n < np; ++n) {
            even += pinv_(i, n) * block.y(2 * n);
            odd += pinv_(i, n) * block.y(2 * n + 1);
        }
        g(2 * i) = even * inv_b_(i);
        g(2 * i + 1) = odd * inv_b_(i);
    }
    return g;
}

GammaVec ls_estimate(const PilotMatrix& x, const ReceiveBlock& y, const ScaleB& b)
{
    return LsEstimator(x, b).estimate(y);
}

namespace {

struct TrialContext {
    const PilotMatrix& x;
    const ScaleB& b;
    const NodeIqProfile& profile;
    double sigma_v2;
    std::uint64_t seed;
    const MonteCarloOptions& opts;
    LsEstimator estimator;
    int k;
    int khat;
};

struct TrialOutcome {
    GammaVec gamma_hat;
    GammaVec error;
};

TrialOutcome trial_with(const TrialContext& ctx, std::uint64_t trial)
{
    const std::uint64_t channel_master = ctx.opts.channel_seed.value_or(ctx.seed);
    Rng channel_rng(derive_seed(channel_master, trial, kChannelStream));
    Rng noise_rng(derive_seed(ctx.seed, trial, kNoiseStream));

    const int n = ctx.opts.channel.n_subcarriers;
    const auto sr_taps = sample_taps(ctx.opts.channel, channel_rng);
    const auto rr_taps = sample_taps(ctx.opts.channel, channel_rng);
    const GammaVec gamma = composite_pair_channels(
        frequency_response_at(sr_taps, n, ctx.k), frequency_response_at(sr_taps, n, ctx.khat),
        frequency_response_at(rr_taps, n, ctx.k), frequency_response_at(rr_taps, n, ctx.khat), ctx.profile);

    const ReceiveBlock y = simulate_received(ctx.x, gamma, ctx.b, ctx.profile.rx_relay, ctx.sigma_v2, noise_rng);

    TrialOutcome out;
    out.gamma_hat = ctx.estimator.estimate(y);
    out.error = gamma - out.gamma_hat;
    return out;
}

TrialContext make_context(const PilotMatrix& x, const ScaleB& b, const NodeIqProfile& profile, double sigma_v2,
                          std::uint64_t seed, const MonteCarloOptions& opts)
{
    opts.channel.validate();
    require(sigma_v2 > 0.0 && std::isfinite(sigma_v2), "sigma_v2 must be positive");
    const int n = opts.channel.n_subcarriers;
    const int khat = image_index(opts.subcarrier, n);
    require(khat != opts.subcarrier, "self-paired subcarriers (k = 1, N/2 + 1) are not simulated");
    return {x, b, profile, sigma_v2, seed, opts, LsEstimator(x, b), opts.subcarrier, khat};
}

} // namespace

EstimateReport run_trial(const PilotMatrix& x, const ScaleB& b, const NodeIqProfile& profile, double sigma_v2,
                         std::uint64_t seed, std::uint64_t trial, const MonteCarloOptions& opts)
{
    const auto outcome = trial_with(make_context(x, b, profile, sigma_v2, seed, opts), trial);
    return {outcome.gamma_hat, outcome.error.squaredNorm(), 1};
}

MonteCarloStats monte_carlo_sum_mse(const PilotMatrix& x, const ScaleB& b, const NodeIqProfile& profile,
                                    double sigma_v2, int trials, std::uint64_t seed, const MonteCarloOptions& opts)
{
    require(trials >= 1, "trials must be >= 1");
    const TrialContext ctx = make_context(x, b, profile, sigma_v2, seed, opts);

    const auto count = static_cast<std::size_t>(trials);
    std::vector<double> sq(count);
    std::vector<GammaVec> err(count);
    parallel_for(count, opts.workers, [&](std::size_t t) {
        err[t] = trial_with(ctx, t).error;
        sq[t] = err[t].squaredNorm();
    });

    MonteCarloStats stats;
    stats.trials = trials;
    double sum = 0.0;
    for (double v : sq) {
        sum += v;
    }
    stats.sum_mse = sum / trials;

    GammaVec mean = GammaVec::Zero();
    for (const auto& e : err) {
        mean += e;
    }
    mean /= static_cast<double>(trials);
    stats.mean_error = mean;

    if (trials > 1) {
        double var = 0.0;
        Eigen::Matrix<double, 8, 1> comp_var = Eigen::Matrix<double, 8, 1>::Zero();
        for (std::size_t t = 0; t < count; ++t) {
            var += (sq[t] - stats.sum_mse) * (sq[t] - stats.sum_mse);
            comp_var += (err[t] - mean).cwiseAbs2();
        }
        stats.std_error = std::sqrt(var / (trials - 1) / trials);
        stats.error_std_error = (comp_var / (trials - 1) / trials).cwiseSqrt();
    }
    stats.squared_errors = std::move(sq);
    return stats;
}

double empirical_sum_mse(const PilotMatrix& x, const ScaleB& b, const NodeIqProfile& profile, double sigma_v2,
                         int trials, std::uint64_t seed, const MonteCarloOptions& opts)
{
    return monte_carlo_sum_mse(x, b, profile, sigma_v2, trials, seed, opts).sum_mse;
}

} // namespace fdiq
