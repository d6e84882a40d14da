#include "molcoh/density.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace molcoh {

namespace {

/// Flattens a wavefunction into coefficient-weighted terms in the frame whose
/// coordinate 0 is the particle's position relative to the center of mass.
std::vector<SymTerm> cm_frame_terms(const Wavefunction& wf, const CoordinateFrame& cm_frame) {
    std::vector<SymTerm> out;
    for (int k = 0; k < wf.basis_size(); ++k) {
        const auto& func = wf.basis[static_cast<std::size_t>(k)];
        const double ck = wf.coefficients[k];
        for (const auto& term : func.terms) {
            Eigen::MatrixXd a = frame_transform(term.a, wf.frame, cm_frame);
            out.push_back({ck * term.weight, std::move(a)});
        }
    }
    return out;
}

}  // namespace

DensityKernel::DensityKernel(const Wavefunction& wf, int particle) : particle_(particle) {
    if (particle < 0 || particle >= wf.system.size())
        throw std::invalid_argument("particle index out of range");
    if (wf.basis_size() == 0 || wf.coefficients.size() != wf.basis_size())
        throw std::invalid_argument("wavefunction has no solved coefficients");

    const CoordinateFrame cm_frame = build_frame(wf.system, particle);
    const std::vector<SymTerm> terms = cm_frame_terms(wf, cm_frame);
    const int n = cm_frame.n_coords();
    const int nr = n - 1;  // coordinates integrated out

    const std::size_t count = terms.size();
    terms_.reserve(count * count);
    norm_ = 0.0;
    for (std::size_t a = 0; a < count; ++a) {
        for (std::size_t b = 0; b < count; ++b) {
            const Eigen::MatrixXd& fa = terms[a].a;
            const Eigen::MatrixXd& fb = terms[b].a;
            const double ww = terms[a].weight * terms[b].weight;

            DensityKernelTerm kt;
            if (nr == 0) {
                kt.c = ww;
                kt.p = fa(0, 0);
                kt.pp = fb(0, 0);
                kt.q = 0.0;
            } else {
                const Eigen::MatrixXd c_block =
                    fa.bottomRightCorner(nr, nr) + fb.bottomRightCorner(nr, nr);
                Eigen::LLT<Eigen::MatrixXd> llt(c_block);
                assert(llt.info() == Eigen::Success && "integrated block must stay SPD");
                double log_det = 0.0;
                for (int i = 0; i < nr; ++i) log_det += std::log(llt.matrixL()(i, i));
                log_det *= 2.0;
                const double pref =
                    std::exp(1.5 * (static_cast<double>(nr) * std::log(M_PI) - log_det));

                const Eigen::VectorXd ra = fa.block(1, 0, nr, 1);
                const Eigen::VectorXd rb = fb.block(1, 0, nr, 1);
                const Eigen::VectorXd ca = llt.solve(ra);
                const Eigen::VectorXd cb = llt.solve(rb);
                kt.c = ww * pref;
                kt.p = fa(0, 0) - ra.dot(ca);
                kt.pp = fb(0, 0) - rb.dot(cb);
                kt.q = ra.dot(cb);
            }
            terms_.push_back(kt);

            // Same-frame overlap of the two primitives, for the norm.
            Eigen::LLT<Eigen::MatrixXd> lltb(fa + fb);
            double log_det_b = 0.0;
            for (int i = 0; i < n; ++i) log_det_b += std::log(lltb.matrixL()(i, i));
            log_det_b *= 2.0;
            norm_ += ww * std::exp(1.5 * (static_cast<double>(n) * std::log(M_PI) - log_det_b));
        }
    }
    if (!(norm_ > 0.0)) throw std::runtime_error("wavefunction norm vanished");
}

namespace {

// One arithmetic path for every entry point, so rho(R, R) evaluated through
// offdiag, offdiag_angle(theta = 0) and diag is bit-identical.
double kernel_sum(const std::vector<DensityKernelTerm>& terms, double rr_bra, double rr_ket,
                  double cross) {
    double total = 0.0;
    for (const auto& kt : terms)
        total += kt.c * std::exp(-kt.p * rr_bra - kt.pp * rr_ket + 2.0 * kt.q * cross);
    return total;
}

}  // namespace

double DensityKernel::offdiag(const Eigen::Vector3d& r_bra, const Eigen::Vector3d& r_ket) const {
    return kernel_sum(terms_, r_bra.squaredNorm(), r_ket.squaredNorm(), r_bra.dot(r_ket)) /
           norm_;
}

double DensityKernel::diag(double radius) const {
    const double rr = radius * radius;
    return kernel_sum(terms_, rr, rr, rr) / norm_;
}

double DensityKernel::offdiag_angle(double radius, double theta_rad) const {
    const double rr = radius * radius;
    return kernel_sum(terms_, rr, rr, rr * std::cos(theta_rad)) / norm_;
}

double density_offdiag(const Wavefunction& wf, int particle, const Eigen::Vector3d& r_bra,
                       const Eigen::Vector3d& r_ket) {
    return DensityKernel(wf, particle).offdiag(r_bra, r_ket);
}

double density_diag(const Wavefunction& wf, int particle, double radius) {
    return DensityKernel(wf, particle).diag(radius);
}

DensityScan suppression_scan(const DensityKernel& kernel, double radius,
                             double theta_step_deg) {
    if (!(radius > 0.0)) throw std::invalid_argument("scan radius must be positive");
    if (!(theta_step_deg > 0.0) || std::abs(std::round(180.0 / theta_step_deg) -
                                            180.0 / theta_step_deg) > 1e-9)
        throw std::invalid_argument("theta step must be positive and divide 180 degrees");

    DensityScan scan;
    scan.particle = kernel.particle();
    scan.radius = radius;
    scan.diag = kernel.diag(radius);
    if (scan.diag < 1e-300) throw std::runtime_error("radius outside support");

    const int count = static_cast<int>(std::lround(360.0 / theta_step_deg));
    scan.theta_deg.resize(static_cast<std::size_t>(count));
    scan.offdiag.resize(static_cast<std::size_t>(count));
    scan.ratio.resize(static_cast<std::size_t>(count));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < count; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const double theta = theta_step_deg * i;
        scan.theta_deg[iu] = theta;
        scan.offdiag[iu] = kernel.offdiag_angle(radius, theta * M_PI / 180.0);
        scan.ratio[iu] = scan.offdiag[iu] / scan.diag;
    }
    return scan;
}

DensityScan suppression_scan(const Wavefunction& wf, int particle, double radius,
                             double theta_step_deg) {
    return suppression_scan(DensityKernel(wf, particle), radius, theta_step_deg);
}

namespace {

/// Parabolic refinement of a grid extremum from its neighbors.
double refine_vertex(double x0, double step, double fm, double f0, double fp) {
    const double denom = fm - 2.0 * f0 + fp;
    if (denom == 0.0) return x0;
    double shift = 0.5 * (fm - fp) / denom;
    shift = std::clamp(shift, -1.0, 1.0);
    return x0 + shift * step;
}

}  // namespace

ScanFeatures extract_features(const DensityScan& scan) {
    const int count = static_cast<int>(scan.theta_deg.size());
    if (count < 4) throw std::invalid_argument("scan grid too small");
    const double step = scan.theta_deg[1] - scan.theta_deg[0];
    if (step > 2.0 + 1e-12) throw std::invalid_argument("feature extraction needs a grid step <= 2 degrees");

    ScanFeatures out;
    auto at = [&](int i) {
        return scan.ratio[static_cast<std::size_t>((i % count + count) % count)];
    };

    out.min_ratio = *std::min_element(scan.ratio.begin(), scan.ratio.end());
    out.depth = 1.0 - out.min_ratio;

    for (int i = 0; i < count; ++i) {
        const double here = at(i), prev = at(i - 1), next = at(i + 1);
        const double theta = scan.theta_deg[static_cast<std::size_t>(i)];
        if (here < prev && here <= next) {
            const double angle = refine_vertex(theta, step, prev, here, next);
            out.minima.push_back({angle, here});
        } else if (i != 0 && here > prev && here >= next) {
            const double angle = refine_vertex(theta, step, prev, here, next);
            out.interior_maxima.push_back({angle, here});
        }
    }

    const int half = static_cast<int>(std::lround(180.0 / step));
    for (int i = 0; i < count; ++i)
        out.delta180 = std::max(out.delta180, std::abs(at(i) - at(i + half)));
    return out;
}

double radial_argmax(const DensityKernel& kernel, double r_max, double step) {
    if (!(step <= 0.01 + 1e-12)) throw std::invalid_argument("radial grid step must be <= 0.01 bohr");
    const int count = static_cast<int>(std::lround(r_max / step));
    double best_r = 0.0;
    double best_v = kernel.diag(0.0);
    int best_i = 0;
    for (int i = 1; i <= count; ++i) {
        const double r = step * i;
        const double v = kernel.diag(r);
        if (v > best_v) {
            best_v = v;
            best_r = r;
            best_i = i;
        }
    }
    if (best_i == 0 || best_i == count) return best_r;
    const double fm = kernel.diag(step * (best_i - 1));
    const double fp = kernel.diag(step * (best_i + 1));
    return refine_vertex(best_r, step, fm, best_v, fp);
}

double radial_argmax(const Wavefunction& wf, int particle, double r_max, double step) {
    return radial_argmax(DensityKernel(wf, particle), r_max, step);
}

double radial_argmax_weighted(const DensityKernel& kernel, double r_max, double step) {
    const int count = static_cast<int>(std::lround(r_max / step));
    auto weighted = [&](double r) { return 4.0 * M_PI * r * r * kernel.diag(r); };
    double best_r = 0.0, best_v = 0.0;
    int best_i = 0;
    for (int i = 1; i <= count; ++i) {
        const double r = step * i;
        const double v = weighted(r);
        if (v > best_v) {
            best_v = v;
            best_r = r;
            best_i = i;
        }
    }
    if (best_i == 0 || best_i == count) return best_r;
    return refine_vertex(best_r, step, weighted(step * (best_i - 1)), best_v,
                         weighted(step * (best_i + 1)));
}

}  // namespace molcoh
