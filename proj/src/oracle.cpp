#include "fdiq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fdiq {

KktReport kkt_residual(const GramMatrix& y, const ScaleB& b, double p_source, double p_relay, int n_pilot)
{
    require(p_source > 0.0 && p_relay > 0.0 && n_pilot >= 1, "invalid KKT inputs");
    Eigen::LLT<GramMatrix> llt(y);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14)) {
        throw RankDeficientError("KKT residual needs a Hermitian PD Gram matrix");
    }
    const GramMatrix inv = llt.solve(GramMatrix::Identity());
    const Eigen::Vector4d bd = b.diagonal();
    const Eigen::Vector4cd b_inv2 = bd.cwiseAbs2().cwiseInverse().cast<cplx>();

    KktReport r;
    const double ns = n_pilot * p_source;
    const double nr = b.rho() * n_pilot * p_relay;
    r.lambda_dual = 1.0 / (ns * ns);
    r.gamma_dual = 1.0 / (nr * nr);

    GramMatrix stationarity = -inv * b_inv2.asDiagonal() * inv;
    stationarity(0, 0) += r.lambda_dual;
    stationarity(1, 1) += r.lambda_dual;
    stationarity(2, 2) += r.gamma_dual;
    stationarity(3, 3) += r.gamma_dual;

    r.stationarity_residual = stationarity.cwiseAbs().maxCoeff() / std::max(r.lambda_dual, r.gamma_dual);
    r.slackness_s = std::abs(source_power_trace(y) - 2.0 * ns) / (2.0 * ns);
    r.slackness_r = std::abs(relay_power_trace(y) - 2.0 * n_pilot * p_relay) / (2.0 * n_pilot * p_relay);
    return r;
}

namespace {

// Rescales F's column blocks so that both power traces of F^H F are active.
void activate_constraints(Eigen::Matrix4cd& f, double target_s, double target_r)
{
    const double s = f.col(0).squaredNorm() + f.col(1).squaredNorm();
    const double r = f.col(2).squaredNorm() + f.col(3).squaredNorm();
    f.leftCols<2>() *= std::sqrt(target_s / s);
    f.rightCols<2>() *= std::sqrt(target_r / r);
}

struct Evaluation {
    double objective = std::numeric_limits<double>::infinity();
    GramMatrix gradient; // d tr{B^-2 Y^-1} / dY = -Y^-1 B^-2 Y^-1
};

Evaluation evaluate(const Eigen::Matrix4cd& f, const Eigen::Vector4cd& b_inv2)
{
    Evaluation e;
    const GramMatrix y = f.adjoint() * f;
    Eigen::LLT<GramMatrix> llt(y);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-15)) {
        return e;
    }
    const GramMatrix inv = llt.solve(GramMatrix::Identity());
    e.objective = (b_inv2.asDiagonal() * inv).trace().real();
    e.gradient = -inv * b_inv2.asDiagonal() * inv;
    return e;
}

} // namespace

PilotOptimum numeric_pilot_optimum(double p_source, double p_relay, double rho, int n_pilot, int iters,
                                   std::uint64_t seed)
{
    require(p_source > 0.0 && p_relay > 0.0 && rho > 0.0, "powers and rho must be positive");
    require(n_pilot >= 4 && iters >= 1, "need n_pilot >= 4 and iters >= 1");

    const ScaleB b(rho);
    const Eigen::Vector4cd b_inv2 = b.diagonal().cwiseAbs2().cwiseInverse().cast<cplx>();
    const double target_s = 2.0 * n_pilot * p_source;
    const double target_r = 2.0 * n_pilot * p_relay;

    Rng rng(seed);
    Eigen::Matrix4cd f;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            f(i, j) = rng.complex_normal();
        }
    }
    activate_constraints(f, target_s, target_r);
    Evaluation current = evaluate(f, b_inv2);

    // Step length is relative to ||F||, adapted by success/failure.
    double step = 0.1;
    double last_gain = std::numeric_limits<double>::infinity();
    int quiet = 0;
    PilotOptimum out;
    int it = 0;
    for (; it < iters; ++it) {
        const Eigen::Matrix4cd dir = -(f * current.gradient);
        const double dir_norm = dir.norm();
        if (!(dir_norm > 0.0)) {
            break;
        }
        const double scale = step * f.norm() / dir_norm;

        bool accepted = false;
        for (int tries = 0; tries < 60; ++tries) {
            Eigen::Matrix4cd candidate = f + scale * std::pow(0.5, tries) * dir;
            activate_constraints(candidate, target_s, target_r);
            Evaluation next = evaluate(candidate, b_inv2);
            if (next.objective < current.objective) {
                last_gain = (current.objective - next.objective) / current.objective;
                f = candidate;
                current = next;
                step = std::min(1.0, step * std::pow(0.5, tries) * 1.5);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            last_gain = 0.0;
            break;
        }
        quiet = last_gain < 1e-14 ? quiet + 1 : 0;
        if (quiet >= 5) {
            break;
        }
    }

    out.y = f.adjoint() * f;
    out.objective = current.objective;
    out.iterations = it;
    out.converged = it > 0 && last_gain <= 1e-8;
    return out;
}

GramMatrix random_feasible_gram(double p_source, double p_relay, int n_pilot, Rng& rng)
{
    Eigen::Matrix4cd f;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            f(i, j) = rng.complex_normal();
        }
    }
    activate_constraints(f, 2.0 * n_pilot * p_source, 2.0 * n_pilot * p_relay);
    return f.adjoint() * f;
}

double numeric_power_optimum(double p_total, double rho, int n_pilot, const NoiseCov& cw, int grid_points)
{
    require(grid_points >= 100, "grid_points must be >= 100");
    require(p_total > 0.0, "total power must be positive");
    double best_ps = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= grid_points; ++i) {
        const double ps = p_total * i / (grid_points + 1.0);
        const PowerSplit split{ps, p_total - ps, p_total};
        const double v = sum_mse_given_powers(split, rho, n_pilot, cw);
        if (v < best) {
            best = v;
            best_ps = ps;
        }
    }
    return best_ps;
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < 500 && (b - a) > tol * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> log_grid(double lo, double hi, int points)
{
    require(lo > 0.0 && hi > lo && points >= 2, "invalid log grid");
    std::vector<double> g(static_cast<std::size_t>(points));
    const double l0 = std::log(lo);
    const double l1 = std::log(hi);
    for (int i = 0; i < points; ++i) {
        g[i] = std::exp(l0 + (l1 - l0) * i / (points - 1));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

double numeric_rho_optimum(const SnrPoint& gamma, const NodeIqProfile& profile, int n_pilot,
                           const std::vector<double>& rho_grid)
{
    require(rho_grid.size() >= 3, "rho grid needs at least 3 points");
    require(std::is_sorted(rho_grid.begin(), rho_grid.end()) && rho_grid.front() > 0.0, "rho grid must be sorted and positive");

    std::size_t best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rho_grid.size(); ++i) {
        const double v = sum_mse_opa(rho_grid[i], gamma, profile, n_pilot);
        if (v < best_v) {
            best_v = v;
            best = i;
        }
    }
    const double lo = std::log(rho_grid[best == 0 ? 0 : best - 1]);
    const double hi = std::log(rho_grid[std::min(best + 1, rho_grid.size() - 1)]);
    const double log_rho = golden_section_minimize(
        [&](double lr) { return sum_mse_opa(std::exp(lr), gamma, profile, n_pilot); }, lo, hi, 1e-12);
    return std::exp(log_rho);
}

Eigen::MatrixXcd principal_sqrt_hpd(const Eigen::MatrixXcd& s, double tol)
{
    require(s.rows() == s.cols() && s.rows() > 0, "principal square root needs a square matrix");
    const double scale = s.cwiseAbs().maxCoeff();
    require(scale > 0.0, "matrix is not positive definite");
    require((s - s.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(s);
    require(eig.info() == Eigen::Success, "eigendecomposition failed");
    const Eigen::VectorXd lambda = eig.eigenvalues();
    require(lambda.minCoeff() > tol * std::max(1.0, lambda.maxCoeff()), "matrix is not positive definite");

    const Eigen::MatrixXcd& v = eig.eigenvectors();
    Eigen::MatrixXcd p = v * lambda.cwiseSqrt().cast<cplx>().asDiagonal() * v.adjoint();
    // Symmetrize away rounding.
    return 0.5 * (p + p.adjoint());
}

Eigen::MatrixXcd random_hpd(int n, Rng& rng)
{
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            g(i, j) = rng.complex_normal();
        }
    }
    Eigen::MatrixXcd s = g.adjoint() * g + 0.1 * Eigen::MatrixXcd::Identity(n, n);
    return 0.5 * (s + s.adjoint());
}

UniquenessWitness lemma1_uniqueness_witness(const Eigen::MatrixXcd& s, Rng& rng)
{
    const Eigen::MatrixXcd p = principal_sqrt_hpd(s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(s);
    const Eigen::MatrixXcd& v = eig.eigenvectors();
    const Eigen::Index n = s.rows();

    Eigen::VectorXcd roots(n);
    Eigen::VectorXcd phases(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sign = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
        roots(i) = sign * std::sqrt(eig.eigenvalues()(i));
        const double phi = rng.uniform(0.0, 2.0 * kPi);
        phases(i) = {std::cos(phi), std::sin(phi)};
    }
    // U commutes with S, so U Q0 U^H squares to S whenever Q0 does.
    const Eigen::MatrixXcd u = v * phases.asDiagonal() * v.adjoint();
    const Eigen::MatrixXcd q0 = v * roots.asDiagonal() * v.adjoint();
    const Eigen::MatrixXcd q = u * q0 * u.adjoint();

    UniquenessWitness w;
    w.square_error = (q * q - s).norm() / s.norm();
    w.distance_to_root = (q - p).norm() / p.norm();
    const bool hermitian = (q - q.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * q.cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> qe(0.5 * (q + q.adjoint()), Eigen::EigenvaluesOnly);
    w.min_eigenvalue = qe.eigenvalues().minCoeff();
    w.is_hpd = hermitian && w.min_eigenvalue > 0.0;
    return w;
}

} // namespace fdiq
