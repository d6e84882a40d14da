#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace molcoh {

struct QuadOutcome {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error (standard error for QMC)
    bool converged = false;
    long long evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (G7, K15) on [a, b]. Subdivides the worst
/// interval until the summed error estimate meets max(abs_tol, rel_tol*|I|)
/// or the interval budget runs out.
QuadOutcome adaptive_gk(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, double rel_tol, int max_intervals = 2000);

/// Inverse standard normal CDF (Acklam's rational approximation polished with
/// one Halley step through erfc); |p - 0.5| < 0.5 required.
double inv_normal_cdf(double p);

/// Randomly shifted rank-1 lattice points in [0,1)^dim; point index i of
/// shift s. Deterministic for a fixed seed.
class ShiftedLattice {
public:
    ShiftedLattice(int dim, int points, int shifts, std::uint64_t seed);
    int dim() const { return dim_; }
    int points() const { return points_; }
    int shifts() const { return shifts_; }
    /// Writes the coordinates of point i under shift s into out[0..dim).
    void point(int s, int i, double* out) const;

private:
    int dim_;
    int points_;
    int shifts_;
    std::vector<std::uint64_t> generating_;  // z vector
    std::vector<double> offsets_;            // shifts x dim
};

}  // namespace molcoh
