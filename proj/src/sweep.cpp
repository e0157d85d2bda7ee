#include "fdiq/sweep.hpp"

#include "fdiq/estimator.hpp"
#include "fdiq/oracle.hpp"
#include "fdiq/pilot.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace fdiq {

SweepAxis parse_axis(std::string_view name)
{
    if (name == "rho") {
        return SweepAxis::rho;
    }
    if (name == "snr_db") {
        return SweepAxis::snr_db;
    }
    throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "' (expected rho|snr_db)");
}

std::string_view to_string(SweepAxis axis)
{
    return axis == SweepAxis::rho ? "rho" : "snr_db";
}

std::vector<double> default_axis_values(SweepAxis axis)
{
    if (axis == SweepAxis::rho) {
        return log_grid(1.0 / 64.0, 64.0, 49);
    }
    std::vector<double> v(41);
    for (int i = 0; i < 41; ++i) {
        v[i] = i;
    }
    return v;
}

void SweepConfig::validate() const
{
    require(!axis_values.empty(), "axis_values must not be empty");
    for (std::size_t i = 0; i < axis_values.size(); ++i) {
        require(std::isfinite(axis_values[i]), "axis_values must be finite");
        require(i == 0 || axis_values[i] > axis_values[i - 1], "axis_values must be strictly increasing");
        if (axis == SweepAxis::rho) {
            require(axis_values[i] > 0.0, "rho axis values must be positive");
        }
    }
    require(!policies.empty(), "policies must not be empty");
    require(trials >= 0, "trials must be >= 0");
    require(n_pilot >= 4, "n_pilot must be >= 4");
    require(sigma_v2 > 0.0, "sigma_v2 must be positive");
    require(fixed_rho > 0.0, "rho must be positive");
    channel.validate();
}

std::vector<SweepRow> SweepResult::curve(Policy policy) const
{
    std::vector<SweepRow> out;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(out),
                 [policy](const SweepRow& r) { return r.policy == policy; });
    return out;
}

SweepResult run_sweep(const SweepConfig& cfg)
{
    cfg.validate();
    const NodeIqProfile profile = cfg.iq.coefficients();

    SweepResult result;
    result.axis = cfg.axis;
    for (std::size_t i = 0; i < cfg.axis_values.size(); ++i) {
        const double x = cfg.axis_values[i];
        const double rho = cfg.axis == SweepAxis::rho ? x : cfg.fixed_rho;
        const SnrPoint gamma = SnrPoint::from_db(cfg.axis == SweepAxis::snr_db ? x : cfg.fixed_snr_db);

        for (const Policy policy : cfg.policies) {
            SweepRow row;
            row.axis_value = x;
            row.policy = policy;
            row.sum_mse_analytic = sum_mse_policy(policy, rho, gamma, profile, cfg.n_pilot);
            row.trials = cfg.trials;
            row.seed = derive_seed(cfg.master_seed, i, policy == Policy::opa ? 11 : 12);

            if (cfg.trials > 0) {
                const PowerSplit split = power_for_snr(gamma, rho, profile, cfg.sigma_v2, policy);
                const PilotMatrix pilot = build_pilot_optimal(cfg.n_pilot, split.p_source, split.p_relay);
                MonteCarloOptions opts;
                opts.channel = cfg.channel;
                opts.subcarrier = cfg.subcarrier;
                opts.workers = cfg.workers;
                row.sum_mse_empirical =
                    empirical_sum_mse(pilot, ScaleB(rho), profile, cfg.sigma_v2, cfg.trials, row.seed, opts);
            }
            result.rows.push_back(row);
        }
    }
    return result;
}

namespace {

void write_rows(std::ostream& os, const SweepResult& result, const std::string& prefix)
{
    for (const auto& r : result.rows) {
        os << prefix << to_string(result.axis) << ',' << format_double(r.axis_value) << ',' << to_string(r.policy)
           << ',' << format_double(r.sum_mse_analytic) << ',';
        if (r.sum_mse_empirical) {
            os << format_double(*r.sum_mse_empirical);
        }
        os << ',' << r.trials << ',' << r.seed << '\n';
    }
}

double curve_value(const SweepRow& r, CurveSource source)
{
    if (source == CurveSource::analytic) {
        return r.sum_mse_analytic;
    }
    if (!r.sum_mse_empirical) {
        throw std::invalid_argument("sweep has no empirical values");
    }
    return *r.sum_mse_empirical;
}

// SNR at which a decreasing curve crosses `level`.
double crossing_snr(const std::vector<SweepRow>& curve, double level, CurveSource source)
{
    const double target = std::log10(level);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double y0 = std::log10(curve_value(curve[i - 1], source));
        const double y1 = std::log10(curve_value(curve[i], source));
        const double lo = std::min(y0, y1);
        const double hi = std::max(y0, y1);
        if (target >= lo && target <= hi) {
            if (y1 == y0) {
                return curve[i - 1].axis_value;
            }
            const double t = (target - y0) / (y1 - y0);
            return curve[i - 1].axis_value + t * (curve[i].axis_value - curve[i - 1].axis_value);
        }
    }
    throw std::out_of_range("Sum-MSE level outside the curve's range");
}

} // namespace

void write_sweep_csv(std::ostream& os, const SweepResult& result)
{
    os << "axis,axis_value,policy,sum_mse_analytic,sum_mse_empirical,trials,seed\n";
    write_rows(os, result, "");
}

std::pair<double, double> common_level_range(const SweepResult& result, CurveSource source)
{
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const Policy p : {Policy::opa, Policy::epa}) {
        const auto c = result.curve(p);
        require(c.size() >= 2, "snr_gain needs both OPA and EPA curves");
        double cmin = std::numeric_limits<double>::infinity();
        double cmax = 0.0;
        for (const auto& r : c) {
            cmin = std::min(cmin, curve_value(r, source));
            cmax = std::max(cmax, curve_value(r, source));
        }
        lo = std::max(lo, cmin);
        hi = std::min(hi, cmax);
    }
    return {lo, hi};
}

double snr_gain(const SweepResult& result, double at_sum_mse, CurveSource source)
{
    require(result.axis == SweepAxis::snr_db, "snr_gain needs an SNR-axis sweep");
    require(at_sum_mse > 0.0, "Sum-MSE level must be positive");
    const auto opa_curve = result.curve(Policy::opa);
    const auto epa_curve = result.curve(Policy::epa);
    require(opa_curve.size() >= 2 && epa_curve.size() >= 2, "snr_gain needs both OPA and EPA curves");
    return crossing_snr(epa_curve, at_sum_mse, source) - crossing_snr(opa_curve, at_sum_mse, source);
}

SweepConfig figure_base_config(int fig_id, const FigureOverrides& o)
{
    if (fig_id < 2 || fig_id > 7) {
        throw std::out_of_range("figure id must be in 2..7");
    }
    const AmplitudeMode mode = o.mode.value_or(AmplitudeMode::deviation);

    SweepConfig cfg;
    cfg.iq = NodeIqParams::uniform(1.0, 1.0, mode);
    if (fig_id <= 4) {
        cfg.iq.tx_source.alpha_db = 5.0;
    }
    cfg.axis = (fig_id == 2 || fig_id == 5) ? SweepAxis::rho : SweepAxis::snr_db;
    cfg.axis_values = o.axis_values.value_or(default_axis_values(cfg.axis));
    cfg.trials = o.trials.value_or(0);
    cfg.master_seed = o.seed.value_or(1);
    cfg.sigma_v2 = o.sigma_v2.value_or(1.0);
    cfg.workers = o.workers.value_or(0);
    cfg.n_pilot = o.n_pilot.value_or(4);
    return cfg;
}

std::vector<double> figure_series_values(int fig_id, const FigureOverrides& o)
{
    const SweepConfig base = figure_base_config(fig_id, o);
    if (o.series_values) {
        return *o.series_values;
    }
    if (base.axis == SweepAxis::rho) {
        return {10.0, 20.0, 30.0};
    }
    const double r_opt = rho_opt(base.iq.coefficients());
    if (fig_id == 3 || fig_id == 6) {
        return {r_opt, 1.0 / 4.0, 1.0 / 32.0};
    }
    return {r_opt, 8.0, 32.0};
}

FigureData reproduce_figure(int fig_id, const FigureOverrides& overrides)
{
    const SweepConfig base = figure_base_config(fig_id, overrides);
    FigureData fig;
    fig.id = fig_id;
    fig.iq = base.iq;

    const auto series = figure_series_values(fig_id, overrides);
    for (std::size_t s = 0; s < series.size(); ++s) {
        SweepConfig cfg = base;
        cfg.master_seed = derive_seed(base.master_seed, s, 100 + static_cast<std::uint64_t>(fig_id));
        std::string label;
        if (cfg.axis == SweepAxis::rho) {
            cfg.fixed_snr_db = series[s];
            label = "snr_db=" + format_double(series[s]);
        } else {
            cfg.fixed_rho = series[s];
            label = "rho=" + format_double(series[s]);
        }
        fig.series.push_back({label, series[s], run_sweep(cfg)});
    }
    return fig;
}

void write_figure_csv(std::ostream& os, const FigureData& figure)
{
    os << "series,axis,axis_value,policy,sum_mse_analytic,sum_mse_empirical,trials,seed\n";
    for (const auto& s : figure.series) {
        write_rows(os, s.result, s.label + ",");
    }
}

} // namespace fdiq
