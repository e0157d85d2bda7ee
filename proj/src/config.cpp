#include "fdiq/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace fdiq {

using nlohmann::json;

namespace {

const json& defaults()
{
    static const json d = json::parse(R"({
  "seed": 1,
  "trials": 0,
  "workers": 0,
  "out": "",
  "n_pilot": 4,
  "sigma_v2": 1.0,
  "rho": 1.0,
  "snr_db": 20.0,
  "alloc": "opa",
  "subcarrier": 2,
  "iq": {
    "mode": "deviation",
    "tx_source": {"alpha_db": 1.0, "theta_deg": 1.0},
    "tx_relay": {"alpha_db": 1.0, "theta_deg": 1.0},
    "rx_relay": {"alpha_db": 1.0, "theta_deg": 1.0}
  },
  "channel": {
    "n_subcarriers": 512,
    "cp_len": 32,
    "n_taps": 32,
    "pdp": "uniform",
    "pdp_decay": 0.0,
    "avg_gain": 1.0
  },
  "sweep": {
    "axis": "snr_db",
    "values": [],
    "policies": ["opa", "epa"]
  },
  "pilot": {
    "kind": "hadamard",
    "p_source": 1.0,
    "p_relay": 1.0,
    "columns": [1, 2, 3, 4]
  },
  "metadata": {
    "bandwidth_hz": 10000000.0,
    "carrier_hz": 2000000000.0
  }
})");
    return d;
}

std::string join(const std::string& prefix, const std::string& key)
{
    return prefix.empty() ? key : prefix + "." + key;
}

bool same_kind(const json& reference, const json& value)
{
    if (reference.is_number()) {
        return value.is_number();
    }
    if (reference.is_string()) {
        return value.is_string();
    }
    if (reference.is_array()) {
        return value.is_array();
    }
    if (reference.is_object()) {
        return value.is_object();
    }
    return reference.type() == value.type();
}

std::string kind_name(const json& reference)
{
    if (reference.is_number()) {
        return "a number";
    }
    if (reference.is_string()) {
        return "a string";
    }
    if (reference.is_array()) {
        return "an array";
    }
    return "an object";
}

void check_against_schema(const json& schema, const json& doc, const std::string& path)
{
    if (!doc.is_object()) {
        throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    }
    for (const auto& [key, value] : doc.items()) {
        const std::string field = join(path, key);
        if (!schema.contains(key)) {
            throw ConfigError(field, "unknown key");
        }
        const json& ref = schema.at(key);
        if (!same_kind(ref, value)) {
            throw ConfigError(field, "expected " + kind_name(ref));
        }
        if (ref.is_object()) {
            check_against_schema(ref, value, field);
        }
    }
}

json parse_override_value(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return json(text);
    }
}

void apply_override(json& doc, const ConfigOverride& ov)
{
    const auto& [path, raw] = ov;
    if (path.empty()) {
        throw ConfigError("<flag>", "empty override key");
    }
    const json::json_pointer pointer("/" + [&] {
        std::string p = path;
        for (auto& c : p) {
            if (c == '.') {
                c = '/';
            }
        }
        return p;
    }());
    if (!defaults().contains(pointer)) {
        throw ConfigError(path, "unknown key");
    }
    const json value = parse_override_value(raw);
    const json& ref = defaults().at(pointer);
    if (ref.is_object()) {
        throw ConfigError(path, "not a leaf key");
    }
    if (!same_kind(ref, value)) {
        throw ConfigError(path, "expected " + kind_name(ref));
    }
    doc[pointer] = value;
}

// Typed accessors that report the offending field path.

const json& at(const json& doc, const std::string& path)
{
    json::json_pointer p("/" + [&] {
        std::string s = path;
        for (auto& c : s) {
            if (c == '.') {
                c = '/';
            }
        }
        return s;
    }());
    return doc.at(p);
}

double get_real(const json& doc, const std::string& path)
{
    const json& v = at(doc, path);
    if (!v.is_number()) {
        throw ConfigError(path, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ConfigError(path, "must be finite");
    }
    return d;
}

long long get_integer(const json& doc, const std::string& path)
{
    const json& v = at(doc, path);
    if (v.is_number_integer()) {
        return v.get<long long>();
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d)) {
            return static_cast<long long>(d);
        }
    }
    throw ConfigError(path, "expected an integer");
}

int get_int(const json& doc, const std::string& path)
{
    const long long v = get_integer(doc, path);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError(path, "integer out of range");
    }
    return static_cast<int>(v);
}

std::string get_string(const json& doc, const std::string& path)
{
    const json& v = at(doc, path);
    if (!v.is_string()) {
        throw ConfigError(path, "expected a string");
    }
    return v.get<std::string>();
}

template <typename Fn>
auto convert(const std::string& path, Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
}

IqParams get_iq(const json& doc, const std::string& chain, AmplitudeMode mode)
{
    IqParams p;
    p.alpha_db = get_real(doc, "iq." + chain + ".alpha_db");
    p.theta_deg = get_real(doc, "iq." + chain + ".theta_deg");
    p.mode = mode;
    convert("iq." + chain + ".theta_deg", [&] { return iq_coefficients(p); });
    return p;
}

RunConfig build(const json& doc)
{
    RunConfig c;

    const json& seed = at(doc, "seed");
    if (seed.is_number_unsigned()) {
        c.seed = seed.get<std::uint64_t>();
    } else {
        const long long s = get_integer(doc, "seed");
        if (s < 0) {
            throw ConfigError("seed", "must be >= 0");
        }
        c.seed = static_cast<std::uint64_t>(s);
    }

    c.trials = get_int(doc, "trials");
    if (c.trials < 0) {
        throw ConfigError("trials", "must be >= 0");
    }
    c.workers = get_int(doc, "workers");
    if (c.workers < 0) {
        throw ConfigError("workers", "must be >= 0 (0 = machine parallelism)");
    }
    c.out = get_string(doc, "out");
    c.n_pilot = get_int(doc, "n_pilot");
    if (c.n_pilot < 4) {
        throw ConfigError("n_pilot", "must be >= 4");
    }
    c.sigma_v2 = get_real(doc, "sigma_v2");
    if (c.sigma_v2 <= 0.0) {
        throw ConfigError("sigma_v2", "must be > 0");
    }
    c.rho = get_real(doc, "rho");
    if (c.rho <= 0.0) {
        throw ConfigError("rho", "must be > 0");
    }
    c.snr_db = get_real(doc, "snr_db");
    c.alloc = convert("alloc", [&] { return parse_policy(get_string(doc, "alloc")); });
    c.subcarrier = get_int(doc, "subcarrier");

    const AmplitudeMode mode = convert("iq.mode", [&] { return parse_amplitude_mode(get_string(doc, "iq.mode")); });
    c.iq.tx_source = get_iq(doc, "tx_source", mode);
    c.iq.tx_relay = get_iq(doc, "tx_relay", mode);
    c.iq.rx_relay = get_iq(doc, "rx_relay", mode);

    c.channel.n_subcarriers = get_int(doc, "channel.n_subcarriers");
    c.channel.cp_len = get_int(doc, "channel.cp_len");
    c.channel.n_taps = get_int(doc, "channel.n_taps");
    c.channel.pdp = convert("channel.pdp", [&] { return parse_pdp_shape(get_string(doc, "channel.pdp")); });
    c.channel.pdp_decay = get_real(doc, "channel.pdp_decay");
    c.channel.avg_gain = get_real(doc, "channel.avg_gain");
    convert("channel", [&] {
        c.channel.validate();
        return 0;
    });
    if (c.subcarrier < 1 || c.subcarrier > c.channel.n_subcarriers) {
        throw ConfigError("subcarrier", "must lie in [1, channel.n_subcarriers]");
    }
    if (is_self_paired(c.subcarrier, c.channel.n_subcarriers)) {
        throw ConfigError("subcarrier", "self-paired subcarriers (1 and N/2+1) cannot be simulated");
    }

    c.sweep_axis = convert("sweep.axis", [&] { return parse_axis(get_string(doc, "sweep.axis")); });
    const json& values = at(doc, "sweep.values");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i].is_number()) {
            throw ConfigError("sweep.values[" + std::to_string(i) + "]", "expected a number");
        }
        c.sweep_values.push_back(values[i].get<double>());
    }
    const json& policies = at(doc, "sweep.policies");
    c.sweep_policies.clear();
    for (std::size_t i = 0; i < policies.size(); ++i) {
        const std::string field = "sweep.policies[" + std::to_string(i) + "]";
        if (!policies[i].is_string()) {
            throw ConfigError(field, "expected a string");
        }
        c.sweep_policies.push_back(convert(field, [&] { return parse_policy(policies[i].get<std::string>()); }));
    }
    if (c.sweep_policies.empty()) {
        throw ConfigError("sweep.policies", "must not be empty");
    }

    const std::string kind = get_string(doc, "pilot.kind");
    if (kind == "hadamard") {
        c.pilot_kind = PilotKind::hadamard;
    } else if (kind == "dft") {
        c.pilot_kind = PilotKind::dft;
    } else if (kind == "conjugate_pair") {
        c.pilot_kind = PilotKind::conjugate_pair;
    } else {
        throw ConfigError("pilot.kind", "expected hadamard|dft|conjugate_pair");
    }
    c.pilot_p_source = get_real(doc, "pilot.p_source");
    c.pilot_p_relay = get_real(doc, "pilot.p_relay");
    if (c.pilot_p_source <= 0.0) {
        throw ConfigError("pilot.p_source", "must be > 0");
    }
    if (c.pilot_p_relay <= 0.0) {
        throw ConfigError("pilot.p_relay", "must be > 0");
    }
    const json& cols = at(doc, "pilot.columns");
    if (cols.size() != 4) {
        throw ConfigError("pilot.columns", "expected exactly 4 column indices");
    }
    for (std::size_t i = 0; i < 4; ++i) {
        if (!cols[i].is_number_integer()) {
            throw ConfigError("pilot.columns[" + std::to_string(i) + "]", "expected an integer");
        }
        c.pilot_columns[i] = cols[i].get<int>();
    }

    c.bandwidth_hz = get_real(doc, "metadata.bandwidth_hz");
    c.carrier_hz = get_real(doc, "metadata.carrier_hz");

    convert("sweep", [&] {
        c.sweep_config().validate();
        return 0;
    });
    return c;
}

} // namespace

SweepConfig RunConfig::sweep_config() const
{
    SweepConfig s;
    s.axis = sweep_axis;
    s.axis_values = sweep_values.empty() ? default_axis_values(sweep_axis) : sweep_values;
    s.fixed_rho = rho;
    s.fixed_snr_db = snr_db;
    s.iq = iq;
    s.n_pilot = n_pilot;
    s.policies = sweep_policies;
    s.trials = trials;
    s.master_seed = seed;
    s.sigma_v2 = sigma_v2;
    s.channel = channel;
    s.subcarrier = subcarrier;
    s.workers = workers;
    return s;
}

std::string default_config_json()
{
    return defaults().dump(2);
}

RunConfig parse_config_text(const std::string& text, const std::vector<ConfigOverride>& overrides)
{
    json user = json::object();
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
        try {
            user = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
        }
    }
    check_against_schema(defaults(), user, "");

    json doc = defaults();
    doc.merge_patch(user);
    for (const auto& ov : overrides) {
        apply_override(doc, ov);
    }
    return build(doc);
}

RunConfig parse_config(const std::optional<std::string>& path, const std::vector<ConfigOverride>& overrides)
{
    std::string text;
    if (path) {
        std::ifstream in(*path);
        if (!in) {
            throw ConfigError("--config", "cannot read '" + *path + "'");
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return parse_config_text(text, overrides);
}

} // namespace fdiq
