#pragma once

#include "fdiq/common.hpp"
#include "fdiq/iq_model.hpp"

#include <array>
#include <iosfwd>

namespace fdiq {

/// Block-type pilot matrix: row n holds
///   [x_S(n,k), conj(x_S(n,khat)), x_R(n,k), conj(x_R(n,khat))].
struct PilotMatrix {
    Eigen::MatrixXcd symbols; // n_pilot x 4
    double p_source = 1.0;
    double p_relay = 1.0;

    int n_pilot() const { return static_cast<int>(symbols.rows()); }
};

using GramMatrix = Eigen::Matrix4cd;

/// B = diag{1, 1, rho, rho}; the 8x8 A is B (x) I_2.
class ScaleB {
public:
    explicit ScaleB(double rho);

    double rho() const { return rho_; }
    Eigen::Vector4d diagonal() const { return {1.0, 1.0, rho_, rho_}; }
    Eigen::Matrix<double, 8, 1> a_diagonal() const;

private:
    double rho_;
};

/// Normalized N x N DFT matrix, F(m, n) = exp(-j 2 pi m n / N) / sqrt(N).
Eigen::MatrixXcd normalized_dft(int n);

/// Four distinct (1-based) DFT columns scaled by sqrt(N_P P_S), sqrt(N_P P_S),
/// sqrt(N_P P_R), sqrt(N_P P_R).
PilotMatrix build_pilot_dft(int n_pilot, double p_source, double p_relay, std::array<int, 4> columns);

/// Order-4 Hadamard matrix with its even rows multiplied by j.
PilotMatrix build_pilot_hadamard4(double p_source, double p_relay);

/// DFT columns (2, N_P) and (3, N_P - 1): column 2 = conj(column 1) and
/// column 4 = conj(column 3), as needed at the self-paired subcarriers.
PilotMatrix build_pilot_conjugate_pair(int n_pilot, double p_source, double p_relay);

/// Optimal pilot for the given powers: Hadamard at N_P = 4, DFT columns 1..4 otherwise.
PilotMatrix build_pilot_optimal(int n_pilot, double p_source, double p_relay);

GramMatrix gram(const PilotMatrix& x);

/// diag{N_P P_S, N_P P_S, N_P P_R, N_P P_R}
GramMatrix optimal_gram(int n_pilot, double p_source, double p_relay);

/// tr{E_S E_S^H Y} and tr{E_R E_R^H Y}
double source_power_trace(const GramMatrix& y);
double relay_power_trace(const GramMatrix& y);

/// tr{B^-2 Y^-1}; the Sum-MSE with the noise trace factored out.
double pilot_objective(const GramMatrix& y, const ScaleB& b);

/// tr{B^-2 Y^-1} tr{C_w}. Throws RankDeficientError when Y is singular.
double analytic_sum_mse(const GramMatrix& y, const ScaleB& b, const NoiseCov& cw);

bool is_optimal_pilot(const PilotMatrix& x, double tol = 1e-9);

/// One row per OFDM symbol, eight columns (re, im of the four entries).
void write_pilot_csv(std::ostream& os, const PilotMatrix& x);

} // namespace fdiq
