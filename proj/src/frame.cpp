#include "molcoh/frame.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace molcoh {

double CoordinateFrame::full_transform_det() const {
    const int n = n_particles;
    Eigen::MatrixXd y(n, n);
    y.topRows(n - 1) = ti_block;
    y.row(n - 1) = masses.transpose() / masses.sum();
    return std::abs(y.determinant());
}

CoordinateFrame build_frame(const SystemDefinition& system, int reference_particle) {
    const int n = system.size();
    if (reference_particle < 0 || reference_particle >= n)
        throw std::invalid_argument("reference particle index out of range");

    CoordinateFrame frame;
    frame.n_particles = n;
    frame.reference_particle = reference_particle;
    frame.masses.resize(n);
    for (int i = 0; i < n; ++i) frame.masses[i] = system.particles[static_cast<std::size_t>(i)].mass;
    const double total = frame.masses.sum();

    // Coordinates are r_i - R_cm for the reference particle followed by the
    // remaining particles in index order. One particle is omitted (its
    // position is fixed by the center of mass); picking the heaviest
    // non-reference particle keeps every reconstruction vector O(1).
    int omitted = reference_particle == 0 ? 1 : 0;
    for (int i = 0; i < n; ++i)
        if (i != reference_particle &&
            frame.masses[i] >= frame.masses[omitted])
            omitted = i;
    std::vector<int> chosen;
    chosen.push_back(reference_particle);
    for (int i = 0; i < n; ++i)
        if (i != reference_particle && i != omitted) chosen.push_back(i);

    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n - 1, n);
    for (int k = 0; k < n - 1; ++k) {
        u.row(k) = -frame.masses.transpose() / total;
        u(k, chosen[static_cast<std::size_t>(k)]) += 1.0;
    }
    frame.ti_block = u;

    frame.mass_matrix = 0.5 * u * frame.masses.cwiseInverse().asDiagonal() * u.transpose();
    frame.mass_matrix = 0.5 * (frame.mass_matrix + frame.mass_matrix.transpose()).eval();

    // Reconstruction vectors u^(i) are exact for this coordinate choice: the
    // chosen particles are the coordinates themselves, and the omitted one
    // follows from sum_i m_i (r_i - R_cm) = 0.
    frame.cm_block = Eigen::MatrixXd::Zero(n, n - 1);
    for (int k = 0; k < n - 1; ++k) frame.cm_block(chosen[static_cast<std::size_t>(k)], k) = 1.0;
    for (int k = 0; k < n - 1; ++k)
        frame.cm_block(omitted, k) =
            -frame.masses[chosen[static_cast<std::size_t>(k)]] / frame.masses[omitted];

    assert(((frame.ti_block * frame.cm_block) - Eigen::MatrixXd::Identity(n - 1, n - 1))
               .cwiseAbs()
               .maxCoeff() < 1e-12);
    return frame;
}

std::vector<int> perm_compose(const std::vector<int>& sigma, const std::vector<int>& tau) {
    std::vector<int> out(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i)
        out[i] = tau[static_cast<std::size_t>(sigma[i])];
    return out;
}

Eigen::MatrixXd permutation_action(const std::vector<int>& perm,
                                   const SystemDefinition& system,
                                   const CoordinateFrame& frame) {
    const int n = system.size();
    if (static_cast<int>(perm.size()) != n)
        throw std::invalid_argument("permutation length does not match particle count");
    std::vector<bool> hit(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        const int j = perm[static_cast<std::size_t>(i)];
        if (j < 0 || j >= n || hit[static_cast<std::size_t>(j)])
            throw std::invalid_argument("not a permutation");
        hit[static_cast<std::size_t>(j)] = true;
        if (j != i && !system.same_group(i, j))
            throw std::invalid_argument("permutation mixes non-identical particles");
    }
    Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) pi(i, perm[static_cast<std::size_t>(i)]) = 1.0;
    return frame.ti_block * pi * frame.cm_block;
}

std::vector<std::vector<int>> symmetry_group(const SystemDefinition& system) {
    const int n = system.size();
    std::vector<int> identity(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) identity[static_cast<std::size_t>(i)] = i;

    std::vector<std::vector<int>> elements = {identity};
    for (const auto& group : system.identical_groups) {
        std::vector<int> sorted = group;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> images = sorted;
        std::vector<std::vector<int>> extended;
        do {
            for (const auto& base : elements) {
                std::vector<int> perm = base;
                for (std::size_t k = 0; k < sorted.size(); ++k)
                    perm[static_cast<std::size_t>(sorted[k])] = images[k];
                extended.push_back(std::move(perm));
            }
        } while (std::next_permutation(images.begin(), images.end()));
        elements = std::move(extended);
    }
    // Identity first, for predictable term ordering downstream.
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i] == identity) {
            std::swap(elements[0], elements[i]);
            break;
        }
    }
    return elements;
}

Eigen::MatrixXd frame_transform_matrix(const CoordinateFrame& src, const CoordinateFrame& dst) {
    if (src.n_particles != dst.n_particles)
        throw std::invalid_argument("frames describe different particle counts");
    return dst.ti_block * src.cm_block;
}

Eigen::MatrixXd frame_transform(const Eigen::MatrixXd& a, const CoordinateFrame& src,
                                const CoordinateFrame& dst) {
    if (a.rows() != src.n_coords() || a.cols() != src.n_coords())
        throw std::invalid_argument("exponent matrix size does not match frame");
    // x_src = T_inv x_dst, so A' = T_inv^T A T_inv keeps the form invariant.
    Eigen::MatrixXd t_inv = frame_transform_matrix(dst, src);
    Eigen::MatrixXd out = t_inv.transpose() * a * t_inv;
    return 0.5 * (out + out.transpose());
}

}  // namespace molcoh
