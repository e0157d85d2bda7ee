#include "fdiq/pilot.hpp"

#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

namespace fdiq {

ScaleB::ScaleB(double rho) : rho_(rho)
{
    require(std::isfinite(rho) && rho > 0.0, "rho must be finite and positive");
}

Eigen::Matrix<double, 8, 1> ScaleB::a_diagonal() const
{
    Eigen::Matrix<double, 8, 1> a;
    a << 1.0, 1.0, 1.0, 1.0, rho_, rho_, rho_, rho_;
    return a;
}

Eigen::MatrixXcd normalized_dft(int n)
{
    require(n >= 1, "DFT size must be positive");
    Eigen::MatrixXcd f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int m = 0; m < n; ++m) {
        for (int c = 0; c < n; ++c) {
            const double phase = -2.0 * kPi * static_cast<double>((m * c) % n) / n;
            f(m, c) = scale * cplx(std::cos(phase), std::sin(phase));
        }
    }
    return f;
}

namespace {

void check_powers(double p_source, double p_relay)
{
    require(std::isfinite(p_source) && p_source > 0.0, "p_source must be positive");
    require(std::isfinite(p_relay) && p_relay > 0.0, "p_relay must be positive");
}

PilotMatrix scale_columns(Eigen::MatrixXcd unit, double p_source, double p_relay)
{
    const double n = static_cast<double>(unit.rows());
    const double ss = std::sqrt(n * p_source);
    const double sr = std::sqrt(n * p_relay);
    unit.col(0) *= ss;
    unit.col(1) *= ss;
    unit.col(2) *= sr;
    unit.col(3) *= sr;
    return {std::move(unit), p_source, p_relay};
}

} // namespace

PilotMatrix build_pilot_dft(int n_pilot, double p_source, double p_relay, std::array<int, 4> columns)
{
    require(n_pilot >= 4, "n_pilot must be >= 4");
    check_powers(p_source, p_relay);
    require(std::set<int>(columns.begin(), columns.end()).size() == 4, "pilot DFT columns must be distinct");
    for (int c : columns) {
        require(c >= 1 && c <= n_pilot, "pilot DFT column index out of range");
    }

    const auto f = normalized_dft(n_pilot);
    Eigen::MatrixXcd unit(n_pilot, 4);
    for (int i = 0; i < 4; ++i) {
        unit.col(i) = f.col(columns[i] - 1);
    }
    return scale_columns(std::move(unit), p_source, p_relay);
}

PilotMatrix build_pilot_hadamard4(double p_source, double p_relay)
{
    check_powers(p_source, p_relay);
    const cplx j{0.0, 1.0};
    Eigen::MatrixXcd h(4, 4);
    // clang-format off
    h << 1.0,  1.0,  1.0,  1.0,
           j,   -j,    j,   -j,
         1.0,  1.0, -1.0, -1.0,
           j,   -j,   -j,    j;
    // clang-format on
    const double ss = std::sqrt(p_source);
    const double sr = std::sqrt(p_relay);
    h.col(0) *= ss;
    h.col(1) *= ss;
    h.col(2) *= sr;
    h.col(3) *= sr;
    return {std::move(h), p_source, p_relay};
}

PilotMatrix build_pilot_conjugate_pair(int n_pilot, double p_source, double p_relay)
{
    require(n_pilot >= 5, "conjugate-pair DFT pilots need n_pilot >= 5");
    return build_pilot_dft(n_pilot, p_source, p_relay, {2, n_pilot, 3, n_pilot - 1});
}

PilotMatrix build_pilot_optimal(int n_pilot, double p_source, double p_relay)
{
    if (n_pilot == 4) {
        return build_pilot_hadamard4(p_source, p_relay);
    }
    return build_pilot_dft(n_pilot, p_source, p_relay, {1, 2, 3, 4});
}

GramMatrix gram(const PilotMatrix& x)
{
    require(x.symbols.cols() == 4, "pilot matrix must have 4 columns");
    return x.symbols.adjoint() * x.symbols;
}

GramMatrix optimal_gram(int n_pilot, double p_source, double p_relay)
{
    const double s = n_pilot * p_source;
    const double r = n_pilot * p_relay;
    return Eigen::Vector4cd(s, s, r, r).asDiagonal();
}

double source_power_trace(const GramMatrix& y)
{
    return y(0, 0).real() + y(1, 1).real();
}

double relay_power_trace(const GramMatrix& y)
{
    return y(2, 2).real() + y(3, 3).real();
}

double pilot_objective(const GramMatrix& y, const ScaleB& b)
{
    Eigen::LLT<GramMatrix> llt(y);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14)) {
        throw RankDeficientError("pilot Gram matrix is singular (pilot matrix lacks full column rank)");
    }
    const GramMatrix inv = llt.solve(GramMatrix::Identity());
    const Eigen::Vector4d bd = b.diagonal();
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        acc += inv(i, i).real() / (bd(i) * bd(i));
    }
    return acc;
}

double analytic_sum_mse(const GramMatrix& y, const ScaleB& b, const NoiseCov& cw)
{
    return pilot_objective(y, b) * cw.trace();
}

bool is_optimal_pilot(const PilotMatrix& x, double tol)
{
    if (x.symbols.cols() != 4 || x.n_pilot() < 4) {
        return false;
    }
    const GramMatrix diff = gram(x) - optimal_gram(x.n_pilot(), x.p_source, x.p_relay);
    const double scale = x.n_pilot() * std::max(x.p_source, x.p_relay);
    return diff.cwiseAbs().maxCoeff() <= tol * scale;
}

void write_pilot_csv(std::ostream& os, const PilotMatrix& x)
{
    os << "x1_re,x1_im,x2_re,x2_im,x3_re,x3_im,x4_re,x4_im\n";
    for (int n = 0; n < x.symbols.rows(); ++n) {
        for (int c = 0; c < x.symbols.cols(); ++c) {
            if (c > 0) {
                os << ',';
            }
            os << format_double(x.symbols(n, c).real()) << ',' << format_double(x.symbols(n, c).imag());
        }
        os << '\n';
    }
}

} // namespace fdiq
