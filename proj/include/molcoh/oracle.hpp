#pragma once

#include <Eigen/Dense>
#include <vector>

#include "molcoh/ecg.hpp"
#include "molcoh/integrals.hpp"
#include "molcoh/quadrature.hpp"

namespace molcoh {

/// Independent validation path for the closed-form matrix elements: direct
/// numerical integration over the translationally invariant coordinates.
/// Systems with up to 2 coordinates use deterministic adaptive quadrature in
/// rotation-invariant variables; 3 coordinates fall back to randomly shifted
/// lattice (quasi-Monte Carlo) sampling with a reported standard error.
/// Nothing here shares Gaussian integral algebra with integrals.cpp.

enum class OperatorTag { kOverlap, kKinetic, kCoulomb };

struct QuadSettings {
    double rel_tol = 1e-9;
    double abs_floor = 1e-16;
    int max_intervals = 400;
    int qmc_points = 16381;
    int qmc_shifts = 8;
    std::uint64_t qmc_seed = 20260810;
};

QuadOutcome oracle_overlap(const SymmetrizedEcg& f, const SymmetrizedEcg& g,
                           const QuadSettings& settings = {});
QuadOutcome oracle_kinetic(const SymmetrizedEcg& f, const SymmetrizedEcg& g,
                           const Eigen::MatrixXd& mass_matrix,
                           const QuadSettings& settings = {});
QuadOutcome oracle_coulomb(const SymmetrizedEcg& f, const SymmetrizedEcg& g,
                           const PairInteraction& interaction,
                           const QuadSettings& settings = {});
/// Sum of kinetic and all pair Coulomb integrals plus overlap cross-check.
QuadOutcome oracle_hamiltonian(const SymmetrizedEcg& f, const SymmetrizedEcg& g,
                               const SystemDefinition& system, const CoordinateFrame& frame,
                               const QuadSettings& settings = {});

struct OracleContext {
    const Eigen::MatrixXd* mass_matrix = nullptr;  // kinetic
    const PairInteraction* interaction = nullptr;  // Coulomb
};

QuadOutcome quadrature_oracle(const SymmetrizedEcg& f, OperatorTag tag,
                              const SymmetrizedEcg& g, const OracleContext& context,
                              const QuadSettings& settings = {});

/// Coefficient-weighted exponent matrix, for density validation.
struct WeightedTerm {
    double weight = 0.0;
    Eigen::MatrixXd a;
};

/// Direct quadrature of the traced coordinate in the density kernel for
/// 2-coordinate systems: integrates over the one remaining 3-vector.
QuadOutcome oracle_density_offdiag(const std::vector<WeightedTerm>& bra,
                                   const std::vector<WeightedTerm>& ket,
                                   const Eigen::Vector3d& r_bra, const Eigen::Vector3d& r_ket,
                                   const QuadSettings& settings = {});

}  // namespace molcoh
