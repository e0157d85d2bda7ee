#pragma once

#include "fdiq/allocation.hpp"
#include "fdiq/channel.hpp"
#include "fdiq/iq_model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fdiq {

enum class SweepAxis { rho, snr_db };

SweepAxis parse_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

struct SweepConfig {
    SweepAxis axis = SweepAxis::snr_db;
    std::vector<double> axis_values;
    double fixed_rho = 1.0;     // used when sweeping SNR
    double fixed_snr_db = 20.0; // used when sweeping rho
    NodeIqParams iq = NodeIqParams::uniform(1.0, 1.0);
    int n_pilot = 4;
    std::vector<Policy> policies{Policy::opa, Policy::epa};
    int trials = 0; // 0 = analytic only
    std::uint64_t master_seed = 1;
    double sigma_v2 = 1.0;
    ChannelConfig channel{};
    int subcarrier = 2;
    int workers = 0;

    void validate() const;
};

struct SweepRow {
    double axis_value = 0.0;
    Policy policy = Policy::opa;
    double sum_mse_analytic = 0.0;
    std::optional<double> sum_mse_empirical;
    int trials = 0;
    std::uint64_t seed = 0;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::snr_db;
    std::vector<SweepRow> rows; // axis order, then policy order

    std::vector<SweepRow> curve(Policy policy) const;
};

std::vector<double> default_axis_values(SweepAxis axis);

SweepResult run_sweep(const SweepConfig& cfg);

void write_sweep_csv(std::ostream& os, const SweepResult& result);

enum class CurveSource { analytic, empirical };

/// SNR (dB) by which EPA must exceed OPA to reach the same Sum-MSE level,
/// interpolating log10(Sum-MSE) linearly in SNR dB.
double snr_gain(const SweepResult& result, double at_sum_mse, CurveSource source = CurveSource::analytic);

/// Sum-MSE range shared by the OPA and EPA curves (lo, hi).
std::pair<double, double> common_level_range(const SweepResult& result, CurveSource source = CurveSource::analytic);

struct FigureOverrides {
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> sigma_v2;
    std::optional<std::vector<double>> axis_values;
    std::optional<std::vector<double>> series_values; // SNRs (dB) or rho values
    std::optional<AmplitudeMode> mode;
    std::optional<int> workers;
    std::optional<int> n_pilot;
};

struct FigureSeries {
    std::string label; // "snr_db=10" or "rho=0.25"
    double fixed_value = 0.0;
    SweepResult result;
};

struct FigureData {
    int id = 0;
    NodeIqParams iq;
    std::vector<FigureSeries> series;
};

/// Preset parameter sets for Figs. 2-7 (asymmetric IQ for 2-4, symmetric for 5-7).
SweepConfig figure_base_config(int fig_id, const FigureOverrides& overrides);
std::vector<double> figure_series_values(int fig_id, const FigureOverrides& overrides);

FigureData reproduce_figure(int fig_id, const FigureOverrides& overrides = {});

/// Like the sweep CSV with a leading series column.
void write_figure_csv(std::ostream& os, const FigureData& figure);

} // namespace fdiq
