#pragma once

#include "fdiq/allocation.hpp"
#include "fdiq/iq_model.hpp"
#include "fdiq/pilot.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace fdiq {

/// KKT residuals of the pilot design problem at a candidate Gram matrix,
/// with the duals fixed at lambda = 1/(N_P P_S)^2, gamma = 1/(rho N_P P_R)^2.
struct KktReport {
    // max-entry norm of -Y^-1 B^-2 Y^-1 + lambda E_S E_S^H + gamma E_R E_R^H,
    // divided by max(lambda, gamma)
    double stationarity_residual = 0.0;
    // |tr{E_S E_S^H Y} - 2 N_P P_S| / (2 N_P P_S), likewise for the relay block
    double slackness_s = 0.0;
    double slackness_r = 0.0;
    double lambda_dual = 0.0;
    double gamma_dual = 0.0;
};

KktReport kkt_residual(const GramMatrix& y, const ScaleB& b, double p_source, double p_relay, int n_pilot);

struct PilotOptimum {
    GramMatrix y;
    double objective = 0.0; // tr{B^-2 Y^-1}
    int iterations = 0;
    bool converged = false;
};

/// Projected descent on a full-rank 4x4 factor F of Y = F^H F; both power
/// constraints are re-activated after every step by rescaling F's column blocks.
PilotOptimum numeric_pilot_optimum(double p_source, double p_relay, double rho, int n_pilot, int iters,
                                   std::uint64_t seed);

/// Random Hermitian PD Gram with both power constraints active.
GramMatrix random_feasible_gram(double p_source, double p_relay, int n_pilot, Rng& rng);

/// Grid argmin of sum_mse_given_powers over P_S = i P / (grid_points + 1).
double numeric_power_optimum(double p_total, double rho, int n_pilot, const NoiseCov& cw, int grid_points);

/// Minimizes f on [lo, hi] by golden-section search to relative tolerance tol.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);

std::vector<double> log_grid(double lo, double hi, int points);

/// Log-grid argmin of sum_mse_opa followed by golden-section refinement in log rho.
double numeric_rho_optimum(const SnrPoint& gamma, const NodeIqProfile& profile, int n_pilot,
                           const std::vector<double>& rho_grid);

/// Unique Hermitian PD P with P^2 = S, via eigendecomposition.
Eigen::MatrixXcd principal_sqrt_hpd(const Eigen::MatrixXcd& s, double tol = 1e-12);

Eigen::MatrixXcd random_hpd(int n, Rng& rng);

struct UniquenessWitness {
    double square_error = 0.0;    // ||Q^2 - S|| / ||S||
    double distance_to_root = 0.0; // ||Q - P|| / ||P||
    double min_eigenvalue = 0.0;   // of Hermitian part of Q
    bool is_hpd = false;
};

/// Builds another square root Q of S (random sign choices on the eigenvalue
/// roots, conjugated by a random unitary that commutes with S) and reports
/// whether it is Hermitian PD and how far it is from the principal root.
UniquenessWitness lemma1_uniqueness_witness(const Eigen::MatrixXcd& s, Rng& rng);

} // namespace fdiq
