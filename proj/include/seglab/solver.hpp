#pragma once

#include "seglab/energy.hpp"
#include "seglab/field.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace seglab {

enum class SolverMethod { NonlinearGaussSeidel, ProjectedGradient };
enum class InitStrategy { HarmonicExtension, Zero };
enum class SweepOrder { Lexicographic, RedBlack };

std::string to_string(SolverMethod m);
std::string to_string(InitStrategy s);
SolverMethod parse_solver_method(const std::string& s);
InitStrategy parse_init_strategy(const std::string& s);
SweepOrder parse_sweep_order(const std::string& s);

struct SolverConfig {
    SolverMethod method = SolverMethod::NonlinearGaussSeidel;
    InitStrategy init = InitStrategy::HarmonicExtension;
    SweepOrder order = SweepOrder::Lexicographic;
    /// Relative to boundary scale times the stencil diagonal 2/hx^2 + 2/hy^2.
    double tol_residual = 1e-8;
    int max_iter = 100000;
    /// Over-relaxation for Gauss-Seidel; 0 picks 2 / (1 + sin(pi h)).
    double omega = 0.0;
    /// Energy and residual are logged every this many iterations (and at the end).
    int log_every = 10;

    void validate() const;
};

struct ConvergenceEntry {
    int iteration = 0;
    double energy = 0.0;
    double residual = 0.0;
};

struct SolveResult {
    PhaseTriple u;
    EnergyBreakdown breakdown;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
    double threshold = 0.0; ///< absolute residual the run had to reach
    std::size_t clamped = 0; ///< negative values removed from the initial guess
    std::vector<ConvergenceEntry> log;
};

/// Max over interior nodes of |Lap u_i - (1/eps) u_i prod_{j != i} u_j^2| where
/// u_i > 0, and of the complementarity defect max(0, Lap u_i) where u_i = 0.
double el_residual(const PhaseTriple& t, double eps);

/// Absolute residual target for a relative tolerance: tol * scale * (2/hx^2 + 2/hy^2).
double residual_threshold(const PhaseTriple& boundary, double tol);

/// Traces copied from phi; interior from decoupled Laplace solves or zeros.
PhaseTriple init_guess(const PhaseTriple& phi, InitStrategy strategy, std::size_t* clamped = nullptr);

/// Minimises E^eps over non-negative triples with the traces of phi. With a
/// start triple the interior is taken from it (clamped at 0).
SolveResult solve_penalized(const PhaseTriple& phi, double eps, const SolverConfig& cfg,
                            const PhaseTriple* start = nullptr);

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceEntry>& log);

} // namespace seglab
