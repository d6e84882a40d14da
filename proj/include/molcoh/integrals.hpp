#pragma once

#include <Eigen/Dense>
#include <vector>

#include "molcoh/ecg.hpp"
#include "molcoh/frame.hpp"
#include "molcoh/system.hpp"

namespace molcoh {

/// One Coulomb term q_i q_j / |r_i - r_j| expressed through the frame's pair
/// vector w = w^(ij).
struct PairInteraction {
    int i = 0;
    int j = 0;
    double prefactor = 0.0;  // q_i * q_j
    Eigen::VectorXd w;
};

std::vector<PairInteraction> coulomb_pairs(const SystemDefinition& system,
                                           const CoordinateFrame& frame);

struct MatrixElementPair {
    double s = 0.0;  // overlap
    double t = 0.0;  // kinetic
    double v = 0.0;  // Coulomb sum
    double h() const { return t + v; }
};

/// All integrals are plain integrals over the functions' own frame
/// coordinates; transforming both operands to another frame rescales them by
/// the cube of the transform determinant, which cancels in every normalized
/// quantity.
double overlap(const SymmetrizedEcg& f, const SymmetrizedEcg& g);
double kinetic(const SymmetrizedEcg& f, const SymmetrizedEcg& g,
               const Eigen::MatrixXd& mass_matrix);
double coulomb_pair(const SymmetrizedEcg& f, const SymmetrizedEcg& g,
                    const PairInteraction& interaction);

/// Overlap, kinetic and full Coulomb sum in one pass over term pairs.
MatrixElementPair hamiltonian_element(const SymmetrizedEcg& f, const SymmetrizedEcg& g,
                                      const SystemDefinition& system,
                                      const CoordinateFrame& frame);
MatrixElementPair hamiltonian_element(const SymmetrizedEcg& f, const SymmetrizedEcg& g,
                                      const Eigen::MatrixXd& mass_matrix,
                                      const std::vector<PairInteraction>& pairs);

}  // namespace molcoh
