#include "molcoh/ecg.hpp"

#include <cmath>
#include <stdexcept>

namespace molcoh {

Eigen::MatrixXd param_to_matrix(const Eigen::VectorXd& theta, int n_coords) {
    const int n = n_coords;
    if (theta.size() != n * (n + 1) / 2)
        throw std::invalid_argument("parameter vector has wrong length");
    if (!theta.allFinite() || theta.cwiseAbs().maxCoeff() > kEcgParamBound)
        throw std::invalid_argument("parameter entries must be finite and within the bound");
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j, ++idx)
            l(i, j) = (i == j) ? std::exp(theta[idx]) : theta[idx];
    return l * l.transpose();
}

Eigen::VectorXd matrix_to_param(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("matrix is not positive definite");
    Eigen::MatrixXd l = llt.matrixL();
    Eigen::VectorXd theta(n * (n + 1) / 2);
    int idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j, ++idx)
            theta[idx] = (i == j) ? std::log(l(i, j)) : l(i, j);
    return theta;
}

EcgPrimitive param_to_primitive(const Eigen::VectorXd& theta, const CoordinateFrame& frame) {
    return {param_to_matrix(theta, frame.n_coords()), frame.reference_particle};
}

Eigen::VectorXd primitive_to_param(const EcgPrimitive& primitive) {
    return matrix_to_param(primitive.a);
}

EcgPrimitive random_primitive(RandomSource& rng, const SystemDefinition& system,
                              const CoordinateFrame& frame, double scale_min,
                              double scale_max) {
    if (!(0.0 < scale_min && scale_min < scale_max))
        throw std::invalid_argument("need 0 < scale_min < scale_max");
    const int n = frame.n_coords();
    constexpr int kRetryCap = 64;
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < system.size(); ++i) {
            for (int j = i + 1; j < system.size(); ++j) {
                const double d = rng.log_uniform(scale_min, scale_max);
                const Eigen::VectorXd w = frame.pair_vector(i, j);
                a += (0.5 / (d * d)) * (w * w.transpose());
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()[0] > 1e-12 * es.eigenvalues()[n - 1])
            return {std::move(a), frame.reference_particle};
    }
    throw std::runtime_error("random_primitive: repeated near-singular draws");
}

SymmetrizedEcg symmetrize(const EcgPrimitive& primitive, const SystemDefinition& system,
                          const CoordinateFrame& frame) {
    if (primitive.frame_ref != frame.reference_particle)
        throw std::invalid_argument("primitive is expressed in a different frame");
    const auto group = symmetry_group(system);
    const double weight = 1.0 / static_cast<double>(group.size());

    SymmetrizedEcg out;
    out.frame_ref = frame.reference_particle;
    out.terms.reserve(group.size());
    const double scale = std::max(1.0, primitive.a.cwiseAbs().maxCoeff());
    for (const auto& perm : group) {
        Eigen::MatrixXd p = permutation_action(perm, system, frame);
        Eigen::MatrixXd image = p.transpose() * primitive.a * p;
        image = 0.5 * (image + image.transpose()).eval();
        bool merged = false;
        for (auto& term : out.terms) {
            if ((term.a - image).cwiseAbs().maxCoeff() <= 1e-14 * scale) {
                term.weight += weight;
                merged = true;
                break;
            }
        }
        if (!merged) out.terms.push_back({weight, std::move(image)});
    }
    return out;
}

}  // namespace molcoh
