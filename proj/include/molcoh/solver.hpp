#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "molcoh/ecg.hpp"
#include "molcoh/frame.hpp"
#include "molcoh/integrals.hpp"
#include "molcoh/random.hpp"
#include "molcoh/system.hpp"

namespace molcoh {

struct AssembledMatrices {
    Eigen::MatrixXd s;  // overlap
    Eigen::MatrixXd t;  // kinetic
    Eigen::MatrixXd v;  // Coulomb
    Eigen::MatrixXd h() const { return t + v; }
};

/// Symmetric matrices of hamiltonian_element results, entry order fixed by
/// basis index (deterministic regardless of thread count).
AssembledMatrices assemble(const std::vector<SymmetrizedEcg>& basis,
                           const SystemDefinition& system, const CoordinateFrame& frame);

struct SpectralSolution {
    Eigen::VectorXd energies;      // ascending, hartree
    Eigen::MatrixXd coefficients;  // column per state, normalized to c^T S c = 1
    int retained_dimension = 0;
    double overlap_condition = 0.0;  // extreme retained eigenvalue ratio of the scaled overlap
};

/// Canonical orthogonalization: eigendecompose the (diagonally scaled)
/// overlap, drop directions below drop_threshold times the largest
/// eigenvalue, and solve the projected standard problem.
/// Throws if every direction is dropped ("basis numerically degenerate").
SpectralSolution solve_gevp(const Eigen::MatrixXd& h, const Eigen::MatrixXd& s,
                            double drop_threshold = 1e-12);

/// One accepted event in the variational history: a growth step
/// (accepted_candidate >= 0 is the running trial id) or a refinement /
/// rescaling sweep (accepted_candidate = -1).
struct GrowthStep {
    int basis_size = 0;
    double energy = 0.0;
    int accepted_candidate = -1;
    int trials_used = 0;
};

struct Wavefunction {
    SystemDefinition system;
    CoordinateFrame frame;
    std::vector<Eigen::MatrixXd> generators;  // primitive exponent matrix per basis function
    std::vector<SymmetrizedEcg> basis;        // symmetrized counterparts
    Eigen::VectorXd coefficients;             // c^T S c = 1
    double energy = 0.0;
    std::uint64_t seed = 0;
    std::string config_digest;
    std::vector<GrowthStep> history;

    int basis_size() const { return static_cast<int>(basis.size()); }
};

struct GrowthOptions {
    int target_size = 128;
    int trials = 32;  // random candidates per step
    std::uint64_t seed = 1;
    double scale_min = 0.05;  // bohr
    double scale_max = 20.0;  // bohr
    double drop_threshold = 1e-12;
    double max_pair_overlap = 0.9999;  // linear-dependence guard
    int step_retries = 8;
    std::ostream* log = nullptr;
};

/// Stochastic variational growth: each step draws `trials` symmetrized
/// candidates and keeps the one that lowers the ground-state energy the
/// most. Deterministic for a fixed seed.
Wavefunction grow_basis(const SystemDefinition& system, const CoordinateFrame& frame,
                        const GrowthOptions& options);

/// Resumes growth of an existing state with a caller-owned random source.
void grow_basis(Wavefunction& state, RandomSource& rng, int trials, int target_size,
                const GrowthOptions& options);

struct RefineOptions {
    int cycles = 2;
    double window = 0.5;      // half-width of the parameter line search
    double param_tol = 0.02;  // golden-section termination width
    bool scale_step = true;   // global exponent rescaling after each cycle
    std::ostream* log = nullptr;
};

/// Cyclic single-parameter golden-section refinement of every basis
/// function, optionally followed by a global exponent rescaling. Only
/// energy-lowering moves are kept.
void refine(Wavefunction& wf, const RefineOptions& options = {});

struct ConvergenceReport {
    int basis_size = 0;
    double energy = 0.0;
    double delta_rel_doubling = 0.0;  // |dE/E| over the last basis-size doubling
    double virial_ratio = 0.0;        // <V>/<T>, -2 for exact Coulomb eigenstates
    double overlap_condition = 0.0;
    bool energy_converged = false;  // delta_rel_doubling < 0.01
    bool virial_ok = false;         // virial_ratio within [-2.02, -1.98]
};

ConvergenceReport converge_report(const Wavefunction& wf);

/// Expectation values from the stored coefficients.
double rayleigh_quotient(const Wavefunction& wf, const AssembledMatrices& mats);

}  // namespace molcoh
