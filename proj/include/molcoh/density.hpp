#pragma once

#include <Eigen/Dense>
#include <vector>

#include "molcoh/solver.hpp"

namespace molcoh {

/// One bra/ket term-pair contribution to the traced density kernel:
/// C exp(-p |R|^2 - p' |R'|^2 + 2 q R.R').
struct DensityKernelTerm {
    double c = 0.0;
    double p = 0.0;
    double pp = 0.0;
    double q = 0.0;
};

/// Nuclear (heavy-particle) reduced density matrix in the position
/// representation, rho(R, R') = int dr'' Psi(r'', R) Psi*(r'', R'), traced
/// analytically over every coordinate except the chosen particle's position
/// relative to the center of mass. Values are in bohr^-3 and normalized so
/// the diagonal integrates to one.
class DensityKernel {
public:
    DensityKernel(const Wavefunction& wf, int particle);

    int particle() const { return particle_; }

    /// General off-diagonal element; symmetric in (R, R').
    double offdiag(const Eigen::Vector3d& r_bra, const Eigen::Vector3d& r_ket) const;

    /// rho(R, R) at |R| = radius; depends on the radius only (N = 0 state).
    double diag(double radius) const;

    /// rho(R, O_theta R) for R = (0, 0, radius) rotated by theta about the
    /// y axis: R' = (radius sin theta, 0, radius cos theta).
    double offdiag_angle(double radius, double theta_rad) const;

    const std::vector<DensityKernelTerm>& terms() const { return terms_; }
    double norm() const { return norm_; }

private:
    int particle_;
    std::vector<DensityKernelTerm> terms_;
    double norm_ = 0.0;  // c^T S c in the particle's frame; divides every value
};

struct DensityScan {
    int particle = 0;
    double radius = 0.0;              // bohr
    std::vector<double> theta_deg;    // grid over [0, 360)
    std::vector<double> offdiag;      // rho(R, O_theta R), bohr^-3
    std::vector<double> ratio;        // offdiag / diag
    double diag = 0.0;                // rho(R, R), bohr^-3
};

struct ScanExtremum {
    double theta_deg = 0.0;
    double ratio = 0.0;
};

struct ScanFeatures {
    double min_ratio = 1.0;
    std::vector<ScanExtremum> minima;           // local minima (refined angles)
    std::vector<ScanExtremum> interior_maxima;  // local maxima away from theta = 0
    double delta180 = 0.0;  // max_theta |ratio(theta) - ratio(theta + 180)|
    double depth = 0.0;     // 1 - min ratio
};

double density_offdiag(const Wavefunction& wf, int particle, const Eigen::Vector3d& r_bra,
                       const Eigen::Vector3d& r_ket);
double density_diag(const Wavefunction& wf, int particle, double radius);

DensityScan suppression_scan(const DensityKernel& kernel, double radius,
                             double theta_step_deg = 1.0);
DensityScan suppression_scan(const Wavefunction& wf, int particle, double radius,
                             double theta_step_deg = 1.0);

/// Grid spacing must not exceed 2 degrees and must divide 180.
ScanFeatures extract_features(const DensityScan& scan);

/// Radius of the diagonal density maximum over (0, r_max] plus the origin,
/// refined by a local quadratic fit.
double radial_argmax(const DensityKernel& kernel, double r_max = 10.0, double step = 0.01);
double radial_argmax(const Wavefunction& wf, int particle, double r_max = 10.0,
                     double step = 0.01);

/// Radius maximizing the radial probability 4 pi R^2 rho(R, R); the scan
/// radius of choice when the density peaks at the origin.
double radial_argmax_weighted(const DensityKernel& kernel, double r_max = 10.0,
                              double step = 0.01);

}  // namespace molcoh
