#include "fdiq/channel.hpp"

#include <cmath>
#include <string>

namespace fdiq {

PdpShape parse_pdp_shape(std::string_view name)
{
    if (name == "uniform") {
        return PdpShape::uniform;
    }
    if (name == "exponential") {
        return PdpShape::exponential;
    }
    throw std::invalid_argument("unknown power-delay profile '" + std::string(name) + "'");
}

std::string_view to_string(PdpShape shape)
{
    return shape == PdpShape::uniform ? "uniform" : "exponential";
}

void ChannelConfig::validate() const
{
    require(n_subcarriers >= 4 && n_subcarriers % 2 == 0, "n_subcarriers must be even and >= 4");
    require(cp_len >= 1, "cp_len must be >= 1");
    require(n_taps >= 1 && n_taps <= cp_len, "n_taps must lie in [1, cp_len]");
    require(std::isfinite(avg_gain) && avg_gain > 0.0, "avg_gain must be positive");
    require(std::isfinite(pdp_decay) && pdp_decay >= 0.0, "pdp_decay must be non-negative");
}

std::vector<double> tap_powers(const ChannelConfig& cfg)
{
    cfg.validate();
    std::vector<double> w(static_cast<std::size_t>(cfg.n_taps));
    double total = 0.0;
    for (int l = 0; l < cfg.n_taps; ++l) {
        w[l] = cfg.pdp == PdpShape::uniform ? 1.0 : std::exp(-cfg.pdp_decay * l);
        total += w[l];
    }
    for (double& x : w) {
        x *= cfg.avg_gain / total;
    }
    return w;
}

std::vector<cplx> sample_taps(const ChannelConfig& cfg, Rng& rng)
{
    const auto powers = tap_powers(cfg);
    std::vector<cplx> taps(powers.size());
    for (std::size_t l = 0; l < powers.size(); ++l) {
        taps[l] = rng.complex_normal(powers[l]);
    }
    return taps;
}

cplx frequency_response_at(const std::vector<cplx>& taps, int n_subcarriers, int k)
{
    require(k >= 1 && k <= n_subcarriers, "subcarrier index out of range");
    cplx acc{0.0, 0.0};
    const long long m = k - 1;
    for (std::size_t l = 0; l < taps.size(); ++l) {
        const long long e = (m * static_cast<long long>(l)) % n_subcarriers;
        const double phase = -2.0 * kPi * static_cast<double>(e) / n_subcarriers;
        acc += taps[l] * cplx(std::cos(phase), std::sin(phase));
    }
    return acc;
}

FreqChannel frequency_response(const std::vector<cplx>& taps, int n_subcarriers)
{
    require(n_subcarriers >= 1, "n_subcarriers must be positive");

    std::vector<cplx> twiddle(static_cast<std::size_t>(n_subcarriers));
    for (int e = 0; e < n_subcarriers; ++e) {
        const double phase = -2.0 * kPi * e / n_subcarriers;
        twiddle[e] = {std::cos(phase), std::sin(phase)};
    }

    FreqChannel out;
    out.response.assign(static_cast<std::size_t>(n_subcarriers), cplx{});
    for (int m = 0; m < n_subcarriers; ++m) {
        cplx acc{0.0, 0.0};
        for (std::size_t l = 0; l < taps.size(); ++l) {
            acc += taps[l] * twiddle[(static_cast<long long>(m) * static_cast<long long>(l)) % n_subcarriers];
        }
        out.response[m] = acc;
    }
    return out;
}

FreqChannel sample_channel(const ChannelConfig& cfg, Rng& rng)
{
    return frequency_response(sample_taps(cfg, rng), cfg.n_subcarriers);
}

int image_index(int k, int n_subcarriers)
{
    require(n_subcarriers >= 1, "n_subcarriers must be positive");
    require(k >= 1 && k <= n_subcarriers, "subcarrier index out of range");
    // <N - k + 2>_N lands in [0, N); residue 0 is subcarrier N.
    const int r = (n_subcarriers - k + 2) % n_subcarriers;
    return r == 0 ? n_subcarriers : r;
}

bool is_self_paired(int k, int n_subcarriers)
{
    return image_index(k, n_subcarriers) == k;
}

} // namespace fdiq
