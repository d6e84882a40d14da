#pragma once

#include <Eigen/Dense>
#include <vector>

#include "molcoh/system.hpp"

namespace molcoh {

/// Translationally invariant, center-of-mass-centered coordinate frame.
///
/// The N-1 coordinates are x = U r with every row of U summing to zero.
/// Coordinate 0 is r_ref - R_cm for the designated reference particle. The
/// internal kinetic operator is T = -sum_jk Lambda_jk grad_xj . grad_xk.
struct CoordinateFrame {
    int n_particles = 0;
    int reference_particle = 0;
    Eigen::VectorXd masses;       // N
    Eigen::MatrixXd ti_block;     // U, (N-1) x N
    Eigen::MatrixXd mass_matrix;  // Lambda = (1/2) U M^-1 U^T, (N-1) x (N-1)
    Eigen::MatrixXd cm_block;     // row i = u^(i): r_i - R_cm = sum_k u_k x_k, N x (N-1)

    int n_coords() const { return n_particles - 1; }
    Eigen::VectorXd cm_vector(int i) const { return cm_block.row(i).transpose(); }
    /// w^(ij) with r_i - r_j = sum_k w_k x_k.
    Eigen::VectorXd pair_vector(int i, int j) const {
        return (cm_block.row(i) - cm_block.row(j)).transpose();
    }
    /// |det Y| of the full lab -> (x, R_cm) transform; the measure on the
    /// internal configuration space scales with |det Y|^-3 between frames.
    double full_transform_det() const;

    bool same_frame(const CoordinateFrame& other) const {
        return n_particles == other.n_particles &&
               reference_particle == other.reference_particle;
    }
};

CoordinateFrame build_frame(const SystemDefinition& system, int reference_particle);

/// Matrix P with x_permuted = P x, where the permuted configuration relabels
/// particle i to the old particle perm[i]. perm must only move particles
/// within identical groups.
Eigen::MatrixXd permutation_action(const std::vector<int>& perm,
                                   const SystemDefinition& system,
                                   const CoordinateFrame& frame);

/// compose(sigma, tau)(i) = tau(sigma(i)); permutation_action is a
/// homomorphism for this composition.
std::vector<int> perm_compose(const std::vector<int>& sigma, const std::vector<int>& tau);

/// All elements of the direct product of symmetric groups on the identical
/// groups, as full-length permutations. The identity comes first.
std::vector<std::vector<int>> symmetry_group(const SystemDefinition& system);

/// Matrix T with x_dst = T x_src for the same physical configuration.
Eigen::MatrixXd frame_transform_matrix(const CoordinateFrame& src, const CoordinateFrame& dst);

/// Re-expresses the quadratic form x^T A x of an exponent matrix in another
/// frame of the same particle set.
Eigen::MatrixXd frame_transform(const Eigen::MatrixXd& a, const CoordinateFrame& src,
                                const CoordinateFrame& dst);

}  // namespace molcoh
