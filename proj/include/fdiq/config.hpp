#pragma once

#include "fdiq/allocation.hpp"
#include "fdiq/channel.hpp"
#include "fdiq/iq_model.hpp"
#include "fdiq/sweep.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fdiq {

/// Configuration problem tied to a dotted field path such as "channel.n_taps".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field))
    {
    }

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class PilotKind { hadamard, dft, conjugate_pair };

struct RunConfig {
    std::uint64_t seed = 1;
    int trials = 0;
    int workers = 0;
    std::string out;
    int n_pilot = 4;
    double sigma_v2 = 1.0;
    double rho = 1.0;
    double snr_db = 20.0;
    Policy alloc = Policy::opa;
    int subcarrier = 2;

    NodeIqParams iq = NodeIqParams::uniform(1.0, 1.0);
    ChannelConfig channel{};

    SweepAxis sweep_axis = SweepAxis::snr_db;
    std::vector<double> sweep_values; // empty = axis default
    std::vector<Policy> sweep_policies{Policy::opa, Policy::epa};

    PilotKind pilot_kind = PilotKind::hadamard;
    double pilot_p_source = 1.0;
    double pilot_p_relay = 1.0;
    std::array<int, 4> pilot_columns{1, 2, 3, 4};

    // Recorded with results only; they do not enter any Sum-MSE expression.
    double bandwidth_hz = 10e6;
    double carrier_hz = 2e9;

    SweepConfig sweep_config() const;
};

/// Dotted key path and a JSON-encoded value (a bare word is taken as a string).
using ConfigOverride = std::pair<std::string, std::string>;

/// The full default document, one leaf per configurable field.
std::string default_config_json();

/// Parses a JSON document (empty text means all defaults), applies overrides
/// in order, and validates. Unknown keys are rejected.
RunConfig parse_config_text(const std::string& text, const std::vector<ConfigOverride>& overrides = {});

RunConfig parse_config(const std::optional<std::string>& path, const std::vector<ConfigOverride>& overrides = {});

} // namespace fdiq
