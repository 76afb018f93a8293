#include "seglab/solver.hpp"

#include "seglab/errors.hpp"
#include "seglab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace seglab {

std::string to_string(SolverMethod m) {
    return m == SolverMethod::NonlinearGaussSeidel ? "gauss_seidel" : "projected_gradient";
}

std::string to_string(InitStrategy s) { return s == InitStrategy::HarmonicExtension ? "harmonic" : "zero"; }

SolverMethod parse_solver_method(const std::string& s) {
    if (s == "gauss_seidel" || s == "ngs") return SolverMethod::NonlinearGaussSeidel;
    if (s == "projected_gradient" || s == "pg") return SolverMethod::ProjectedGradient;
    fail(ErrorCode::Config, "unknown solver method '" + s + "'");
}

InitStrategy parse_init_strategy(const std::string& s) {
    if (s == "harmonic") return InitStrategy::HarmonicExtension;
    if (s == "zero") return InitStrategy::Zero;
    fail(ErrorCode::Config, "unknown init strategy '" + s + "'");
}

SweepOrder parse_sweep_order(const std::string& s) {
    if (s == "lexicographic") return SweepOrder::Lexicographic;
    if (s == "red_black") return SweepOrder::RedBlack;
    fail(ErrorCode::Config, "unknown sweep order '" + s + "'");
}

void SolverConfig::validate() const {
    require(tol_residual > 0.0, "tol_residual must be positive");
    require(max_iter >= 1, "max_iter must be at least 1");
    require(omega == 0.0 || (omega > 0.0 && omega < 2.0), "omega must lie in (0, 2)");
    require(log_every >= 1, "log_every must be at least 1");
}

namespace {

double boundary_scale(const PhaseTriple& phi) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c)
        for (auto [i, j] : boundary_nodes(phi.grid())) s = std::max(s, std::abs(phi[c](i, j)));
    return s > 0.0 ? s : 1.0;
}

double default_omega(const Grid& g) {
    const int n = std::max(g.nx(), g.ny());
    return 2.0 / (1.0 + std::sin(std::numbers::pi / n));
}

struct Stencil {
    double ax, ay, diag;
    explicit Stencil(const Grid& g)
        : ax(1.0 / (g.hx() * g.hx())), ay(1.0 / (g.hy() * g.hy())), diag(2.0 * (ax + ay)) {}
};

// One relaxed projected update of component c at (i, j); returns |change|.
inline double relax(PhaseTriple& t, int c, int i, int j, double eps, double omega, const Stencil& s) {
    ScalarField& u = t[c];
    const ScalarField& v = t[(c + 1) % 3];
    const ScalarField& w = t[(c + 2) % 3];
    const double nb = (u(i - 1, j) + u(i + 1, j)) * s.ax + (u(i, j - 1) + u(i, j + 1)) * s.ay;
    const double k = v(i, j) * v(i, j) * w(i, j) * w(i, j) / eps;
    const double target = nb / (s.diag + k);
    const double old = u(i, j);
    const double next = std::max(0.0, old + omega * (target - old));
    u(i, j) = next;
    return std::abs(next - old);
}

void sweep(PhaseTriple& t, double eps, double omega, SweepOrder order, const Stencil& s) {
    const Grid& g = t.grid();
    if (order == SweepOrder::Lexicographic) {
        for (int c = 0; c < 3; ++c)
            for (int j = 1; j < g.ny(); ++j)
                for (int i = 1; i < g.nx(); ++i) relax(t, c, i, j, eps, omega, s);
        return;
    }
    for (int c = 0; c < 3; ++c)
        for (int colour = 0; colour < 2; ++colour)
            parallel_for(g.ny() - 1, [&](int row) {
                const int j = row + 1;
                for (int i = 1 + ((j + 1 + colour) & 1); i < g.nx(); i += 2) relax(t, c, i, j, eps, omega, s);
            });
}

// Plain Laplace solve by SOR on one component; used for the harmonic initial guess.
void harmonic_fill(ScalarField& u, double tol) {
    const Grid& g = u.grid();
    const Stencil s(g);
    const double omega = default_omega(g);
    double scale = 0.0;
    for (auto [i, j] : boundary_nodes(g)) scale = std::max(scale, std::abs(u(i, j)));
    if (scale == 0.0) return;
    const double target = tol * scale;
    const int cap = 200 * (g.nx() + g.ny()) + 1000;
    for (int it = 0; it < cap; ++it) {
        double change = 0.0;
        for (int j = 1; j < g.ny(); ++j)
            for (int i = 1; i < g.nx(); ++i) {
                const double nb = (u(i - 1, j) + u(i + 1, j)) * s.ax + (u(i, j - 1) + u(i, j + 1)) * s.ay;
                const double next = u(i, j) + omega * (nb / s.diag - u(i, j));
                change = std::max(change, std::abs(next - u(i, j)));
                u(i, j) = next;
            }
        if (change <= target) return;
    }
}

double total_energy(const PhaseTriple& t, double eps) {
    return dirichlet_energy(t[0]) + dirichlet_energy(t[1]) + dirichlet_energy(t[2]) + penalty(t, eps);
}

void check_finite(const PhaseTriple& t, int iteration) {
    for (int c = 0; c < 3; ++c)
        for (double v : t[c].values())
            if (!std::isfinite(v))
                fail(ErrorCode::SolverFailure, "non-finite iterate at iteration " + std::to_string(iteration));
}

} // namespace

double el_residual(const PhaseTriple& t, double eps) {
    check_common_grid(t);
    require(eps > 0.0, "eps must be positive");
    const Grid& g = t.grid();
    const Stencil s(g);
    double worst = 0.0;
    for (int c = 0; c < 3; ++c) {
        const ScalarField& u = t[c];
        const ScalarField& v = t[(c + 1) % 3];
        const ScalarField& w = t[(c + 2) % 3];
        for (int j = 1; j < g.ny(); ++j)
            for (int i = 1; i < g.nx(); ++i) {
                const double lap =
                    (u(i - 1, j) - 2.0 * u(i, j) + u(i + 1, j)) * s.ax + (u(i, j - 1) - 2.0 * u(i, j) + u(i, j + 1)) * s.ay;
                const double r = lap - u(i, j) * v(i, j) * v(i, j) * w(i, j) * w(i, j) / eps;
                // at u = 0 only a positive r (descent into u > 0) is a defect
                worst = std::max(worst, u(i, j) > 0.0 ? std::abs(r) : std::max(0.0, r));
            }
    }
    return worst;
}

double residual_threshold(const PhaseTriple& boundary, double tol) {
    const Stencil s(boundary.grid());
    return tol * boundary_scale(boundary) * s.diag;
}

PhaseTriple init_guess(const PhaseTriple& phi, InitStrategy strategy, std::size_t* clamped) {
    check_common_grid(phi);
    const Grid& g = phi.grid();
    PhaseTriple out{ScalarField(g), ScalarField(g), ScalarField(g)};
    std::size_t removed = 0;
    for (int c = 0; c < 3; ++c) {
        for (auto [i, j] : boundary_nodes(g)) {
            require(phi[c](i, j) >= 0.0, "boundary data must be non-negative");
            out[c](i, j) = phi[c](i, j);
        }
        if (strategy == InitStrategy::HarmonicExtension) {
            harmonic_fill(out[c], 1e-13);
            for (double& v : out[c].values())
                if (v < 0.0) {
                    v = 0.0;
                    ++removed;
                }
        }
    }
    if (clamped) *clamped = removed;
    return out;
}

SolveResult solve_penalized(const PhaseTriple& phi, double eps, const SolverConfig& cfg, const PhaseTriple* start) {
    check_common_grid(phi);
    require(eps > 0.0, "eps must be positive");
    cfg.validate();
    const Grid& g = phi.grid();

    // the data must themselves be segregated on the boundary
    for (auto [i, j] : boundary_nodes(g))
        if (phi[0](i, j) > 0.0 && phi[1](i, j) > 0.0 && phi[2](i, j) > 0.0)
            fail(ErrorCode::InvalidBoundaryData, "boundary data violate phi1 phi2 phi3 = 0");

    SolveResult res;
    if (start) {
        require(start->grid() == g, "start triple lives on a different grid");
        res.u = *start;
        for (int c = 0; c < 3; ++c) {
            for (double& v : res.u[c].values())
                if (v < 0.0) {
                    v = 0.0;
                    ++res.clamped;
                }
            for (auto [i, j] : boundary_nodes(g)) res.u[c](i, j) = phi[c](i, j);
        }
    } else {
        res.u = init_guess(phi, cfg.init, &res.clamped);
    }
    res.threshold = residual_threshold(phi, cfg.tol_residual);

    const Stencil s(g);
    PhaseTriple& u = res.u;
    double energy = total_energy(u, eps);
    res.residual = el_residual(u, eps);
    res.log.push_back({0, energy, res.residual});

    if (cfg.method == SolverMethod::NonlinearGaussSeidel) {
        const double omega = cfg.omega > 0.0 ? cfg.omega : default_omega(g);
        for (int it = 1; it <= cfg.max_iter && res.residual > res.threshold; ++it) {
            sweep(u, eps, omega, cfg.order, s);
            res.iterations = it;
            // the residual costs as much as a sweep; test it on a coarser schedule
            if (it % 4 == 0 || it == cfg.max_iter) {
                check_finite(u, it);
                res.residual = el_residual(u, eps);
            }
            if (it % cfg.log_every == 0) res.log.push_back({it, total_energy(u, eps), el_residual(u, eps)});
        }
    } else {
        // projected gradient with Armijo backtracking on the interior nodes
        double step = 1.0 / (2.0 * g.hx() * g.hy() * s.diag * 2.0);
        for (int it = 1; it <= cfg.max_iter && res.residual > res.threshold; ++it) {
            const PhaseTriple grad = energy_gradient(u, eps);
            PhaseTriple trial = u;
            double trial_energy = 0.0;
            bool accepted = false;
            for (int bt = 0; bt < 60; ++bt) {
                double decrease = 0.0;
                for (int c = 0; c < 3; ++c)
                    for (int j = 1; j < g.ny(); ++j)
                        for (int i = 1; i < g.nx(); ++i) {
                            const double v = std::max(0.0, u[c](i, j) - step * grad[c](i, j));
                            decrease += grad[c](i, j) * (u[c](i, j) - v);
                            trial[c](i, j) = v;
                        }
                trial_energy = total_energy(trial, eps);
                if (trial_energy <= energy - 1e-4 * decrease) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                if (trial_energy > energy)
                    fail(ErrorCode::SolverFailure, "energy increased after backtracking at iteration " +
                                                       std::to_string(it) + " (E = " + std::to_string(energy) + ")");
                res.iterations = it;
                break;
            }
            u = std::move(trial);
            energy = trial_energy;
            step *= 2.0;
            res.iterations = it;
            check_finite(u, it);
            res.residual = el_residual(u, eps);
            if (it % cfg.log_every == 0) res.log.push_back({it, energy, res.residual});
        }
    }

    res.residual = el_residual(u, eps);
    res.converged = res.residual <= res.threshold;
    energy = total_energy(u, eps);
    if (res.log.back().iteration != res.iterations) res.log.push_back({res.iterations, energy, res.residual});
    res.breakdown = energy_eps(u, eps);
    return res;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceEntry>& log) {
    os.precision(17);
    os << "iteration,energy,residual\n";
    for (const auto& e : log) os << e.iteration << ',' << e.energy << ',' << e.residual << '\n';
}

} // namespace seglab
