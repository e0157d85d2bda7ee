#pragma once

#include "fdiq/common.hpp"

#include <string_view>
#include <vector>

namespace fdiq {

enum class PdpShape { uniform, exponential };

PdpShape parse_pdp_shape(std::string_view name);
std::string_view to_string(PdpShape shape);

struct ChannelConfig {
    int n_subcarriers = 512;
    int cp_len = 32;
    int n_taps = 32;
    PdpShape pdp = PdpShape::uniform;
    double pdp_decay = 0.0; // per-tap exponent for the exponential profile
    double avg_gain = 1.0;  // E|H(k)|^2

    void validate() const;
};

struct FreqChannel {
    std::vector<cplx> response; // index 0 is subcarrier 1
};

/// Tap variances, normalized so they sum to cfg.avg_gain.
std::vector<double> tap_powers(const ChannelConfig& cfg);

std::vector<cplx> sample_taps(const ChannelConfig& cfg, Rng& rng);

/// Length-n DFT of a short tap vector; H(k) = sum_l h_l exp(-j 2 pi (k-1) l / n).
FreqChannel frequency_response(const std::vector<cplx>& taps, int n_subcarriers);

/// Single bin of the same transform, k is 1-based.
cplx frequency_response_at(const std::vector<cplx>& taps, int n_subcarriers, int k);

FreqChannel sample_channel(const ChannelConfig& cfg, Rng& rng);

/// Image (mirror) subcarrier <N - k + 2>_N, 1-based in and out.
int image_index(int k, int n_subcarriers);

bool is_self_paired(int k, int n_subcarriers);

} // namespace fdiq
