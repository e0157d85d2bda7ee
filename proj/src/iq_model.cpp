#include "fdiq/iq_model.hpp"

#include <cmath>
#include <string>

namespace fdiq {

AmplitudeMode parse_amplitude_mode(std::string_view name)
{
    if (name == "deviation") {
        return AmplitudeMode::deviation;
    }
    if (name == "ratio") {
        return AmplitudeMode::ratio;
    }
    throw std::invalid_argument("unknown amplitude mode '" + std::string(name) + "' (expected deviation|ratio)");
}

std::string_view to_string(AmplitudeMode mode)
{
    return mode == AmplitudeMode::deviation ? "deviation" : "ratio";
}

double amplitude_linear(double alpha_db, AmplitudeMode mode)
{
    const double ratio = std::pow(10.0, alpha_db / 20.0);
    return mode == AmplitudeMode::deviation ? ratio - 1.0 : ratio;
}

IqCoeffs iq_coefficients(const IqParams& params)
{
    require(std::isfinite(params.alpha_db) && std::isfinite(params.theta_deg), "IQ parameters must be finite");
    require(params.theta_deg > -180.0 && params.theta_deg < 180.0, "theta_deg must lie in (-180, 180)");

    const double alpha = amplitude_linear(params.alpha_db, params.mode);
    const double half = 0.5 * params.theta_deg * kPi / 180.0;
    const double c = std::cos(half);
    const double s = std::sin(half);

    IqCoeffs out;
    out.mu = {c, alpha * s};
    out.nu = {alpha * c, -s};
    return out;
}

NodeIqProfile NodeIqParams::coefficients() const
{
    return {iq_coefficients(tx_source), iq_coefficients(tx_relay), iq_coefficients(rx_relay)};
}

NodeIqParams NodeIqParams::uniform(double alpha_db, double theta_deg, AmplitudeMode mode)
{
    const IqParams p{alpha_db, theta_deg, mode};
    return {p, p, p};
}

namespace {

struct PairComposite {
    cplx a; // direct term at the subcarrier
    cplx b; // image term at the subcarrier
};

// Composite (a, b) coefficients at subcarrier `at` given the raw channel at
// `at` and at its image.
PairComposite composite(cplx h_at, cplx h_image, const IqCoeffs& tx, const IqCoeffs& rx)
{
    return {rx.mu * tx.mu * h_at + rx.nu * std::conj(tx.nu) * std::conj(h_image),
            rx.mu * tx.nu * h_at + rx.nu * std::conj(tx.mu) * std::conj(h_image)};
}

} // namespace

GammaVec composite_pair_channels(cplx h_sr_k, cplx h_sr_khat, cplx h_rr_k, cplx h_rr_khat,
                                 const NodeIqProfile& profile)
{
    for (const cplx h : {h_sr_k, h_sr_khat, h_rr_k, h_rr_khat}) {
        require(std::isfinite(h.real()) && std::isfinite(h.imag()), "channel coefficients must be finite");
    }

    const auto sr_k = composite(h_sr_k, h_sr_khat, profile.tx_source, profile.rx_relay);
    const auto sr_khat = composite(h_sr_khat, h_sr_k, profile.tx_source, profile.rx_relay);
    const auto rr_k = composite(h_rr_k, h_rr_khat, profile.tx_relay, profile.rx_relay);
    const auto rr_khat = composite(h_rr_khat, h_rr_k, profile.tx_relay, profile.rx_relay);

    GammaVec g;
    g << sr_k.a, std::conj(sr_khat.b), sr_k.b, std::conj(sr_khat.a),
         rr_k.a, std::conj(rr_khat.b), rr_k.b, std::conj(rr_khat.a);
    return g;
}

NoiseCov noise_cov(const IqCoeffs& rx_relay, double sigma_v2)
{
    require(std::isfinite(sigma_v2) && sigma_v2 > 0.0, "sigma_v2 must be positive");

    const double diag = sigma_v2 * rx_relay.power_gain();
    const cplx off = 2.0 * sigma_v2 * rx_relay.mu * rx_relay.nu;

    NoiseCov cov;
    cov.sigma_v2 = sigma_v2;
    cov.entries << diag, off, std::conj(off), diag;
    return cov;
}

} // namespace fdiq
