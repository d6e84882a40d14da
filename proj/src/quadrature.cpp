#include "molcoh/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "molcoh/random.hpp"

namespace molcoh {

namespace {

// 15-point Kronrod nodes/weights on [-1, 1] with the embedded 7-point Gauss
// weights (nodes at the odd Kronrod indices).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
    double value;
    double error;
};

GkEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double result_gauss = fc * kWg[3];
    double result_kronrod = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        result_kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
    }
    const double value = result_kronrod * half;
    const double err = std::abs((result_kronrod - result_gauss) * half);
    return {value, err};
}

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& other) const { return error < other.error; }
};

}  // namespace

QuadOutcome adaptive_gk(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, double rel_tol, int max_intervals) {
    QuadOutcome out;
    GkEstimate first = gk15(f, a, b);
    out.evaluations = 15;
    std::priority_queue<Interval> queue;
    queue.push({a, b, first.value, first.error});
    double total_value = first.value;
    double total_error = first.error;
    int intervals = 1;
    while (total_error > std::max(abs_tol, rel_tol * std::abs(total_value)) &&
           intervals < max_intervals) {
        Interval worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {  // interval at machine resolution
            queue.push(worst);
            break;
        }
        GkEstimate left = gk15(f, worst.a, mid);
        GkEstimate right = gk15(f, mid, worst.b);
        out.evaluations += 30;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push({worst.a, mid, left.value, left.error});
        queue.push({mid, worst.b, right.value, right.error});
        ++intervals;
    }
    out.value = total_value;
    out.error = total_error;
    out.converged = total_error <= std::max(abs_tol, rel_tol * std::abs(total_value));
    return out;
}

double inv_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inv_normal_cdf: p outside (0,1)");
    // Acklam's approximation.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step against the exact CDF.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

ShiftedLattice::ShiftedLattice(int dim, int points, int shifts, std::uint64_t seed)
    : dim_(dim), points_(points), shifts_(shifts) {
    if (dim < 1 || points < 2 || shifts < 2)
        throw std::invalid_argument("ShiftedLattice: bad sizes");
    // Korobov generating vector z = (1, a, a^2, ...) mod N.
    const std::uint64_t n = static_cast<std::uint64_t>(points);
    const std::uint64_t a = 5693;
    generating_.resize(static_cast<std::size_t>(dim));
    std::uint64_t z = 1;
    for (int k = 0; k < dim; ++k) {
        generating_[static_cast<std::size_t>(k)] = z;
        z = (z * a) % n;
    }
    RandomSource rng(seed);
    offsets_.resize(static_cast<std::size_t>(shifts * dim));
    for (auto& o : offsets_) o = rng.uniform01();
}

void ShiftedLattice::point(int s, int i, double* out) const {
    const double inv_n = 1.0 / static_cast<double>(points_);
    for (int k = 0; k < dim_; ++k) {
        const double base = static_cast<double>(
            (static_cast<std::uint64_t>(i) * generating_[static_cast<std::size_t>(k)]) %
            static_cast<std::uint64_t>(points_));
        double v = base * inv_n + offsets_[static_cast<std::size_t>(s * dim_ + k)];
        v -= std::floor(v);
        out[k] = v;
    }
}

}  // namespace molcoh
