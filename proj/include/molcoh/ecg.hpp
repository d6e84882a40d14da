#pragma once

#include <Eigen/Dense>
#include <vector>

#include "molcoh/frame.hpp"
#include "molcoh/random.hpp"
#include "molcoh/system.hpp"

namespace molcoh {

/// Spherical explicitly correlated Gaussian exp(-sum_jk A_jk x_j . x_k),
/// tagged with the reference particle of the frame its matrix lives in.
struct EcgPrimitive {
    Eigen::MatrixXd a;  // symmetric positive definite, bohr^-2
    int frame_ref = 0;
};

struct SymTerm {
    double weight = 0.0;
    Eigen::MatrixXd a;
};

/// Permutation-projected Gaussian: a weighted list of exponent matrices,
/// closed under the symmetry group action, all in one frame.
struct SymmetrizedEcg {
    std::vector<SymTerm> terms;
    int frame_ref = 0;
};

/// Largest admissible |theta| entry; exp() of anything bigger overflows the
/// Cholesky factor.
inline constexpr double kEcgParamBound = 300.0;

/// theta has n(n+1)/2 entries filling a lower-triangular L row by row, with
/// exponentiated diagonal; A = L L^T is SPD for every finite theta.
Eigen::MatrixXd param_to_matrix(const Eigen::VectorXd& theta, int n_coords);
Eigen::VectorXd matrix_to_param(const Eigen::MatrixXd& a);

EcgPrimitive param_to_primitive(const Eigen::VectorXd& theta, const CoordinateFrame& frame);
Eigen::VectorXd primitive_to_param(const EcgPrimitive& primitive);

/// Draws pairwise correlation lengths d_ij log-uniformly from
/// [scale_min, scale_max] bohr and assembles
/// A = sum_{i<j} w^(ij) w^(ij)T / (2 d_ij^2). Resamples a near-singular
/// draw up to a small retry cap.
EcgPrimitive random_primitive(RandomSource& rng, const SystemDefinition& system,
                              const CoordinateFrame& frame, double scale_min,
                              double scale_max);

/// Totally symmetric projection over the identical-group symmetry group;
/// duplicate images are merged with summed weights.
SymmetrizedEcg symmetrize(const EcgPrimitive& primitive, const SystemDefinition& system,
                          const CoordinateFrame& frame);

}  // namespace molcoh
