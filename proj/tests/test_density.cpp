#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "molcoh/density.hpp"
#include "molcoh/quadrature.hpp"
#include "molcoh/random.hpp"
#include "molcoh/solver.hpp"

using namespace molcoh;

namespace {

/// Shared moderately converged h2 state; built once.
const Wavefunction& h2_state() {
    static const Wavefunction wf = [] {
        SystemDefinition sys = build_system("h2");
        CoordinateFrame frame = build_frame(sys, 0);
        GrowthOptions opt;
        opt.target_size = 40;
        opt.trials = 16;
        opt.seed = 3;
        Wavefunction state = grow_basis(sys, frame, opt);
        RefineOptions ref;
        ref.cycles = 1;
        refine(state, ref);
        return state;
    }();
    return wf;
}

Eigen::Matrix3d random_rotation(RandomSource& rng) {
    Eigen::Vector4d q;
    for (int i = 0; i < 4; ++i) q[i] = rng.normal();
    q.normalize();
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Eigen::Matrix3d rot;
    rot << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return rot;
}

}  // namespace

TEST_CASE("kernel reproduces the diagonal and basic identities") {
    const Wavefunction& wf = h2_state();
    DensityKernel kernel(wf, 0);
    RandomSource rng(19);

    // R' = R reproduces the diagonal exactly.
    for (double r : {0.3, 0.7, 1.4}) {
        const Eigen::Vector3d rv(0.0, 0.0, r);
        CHECK(kernel.offdiag(rv, rv) == kernel.diag(r));
        CHECK(kernel.offdiag_angle(r, 0.0) == kernel.diag(r));
    }

    // Parity of the spherical basis.
    const Eigen::Vector3d rp(0.4, -0.2, 0.9);
    CHECK(kernel.offdiag(rp, rp) == kernel.offdiag(-rp, -rp));

    for (int rep = 0; rep < 20; ++rep) {
        Eigen::Vector3d ra(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                           rng.uniform(-1.5, 1.5));
        Eigen::Vector3d rb(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                           rng.uniform(-1.5, 1.5));

        // Reality / hermiticity.
        CHECK(kernel.offdiag(ra, rb) ==
              doctest::Approx(kernel.offdiag(rb, ra)).epsilon(1e-12));

        // Cauchy-Schwarz at arbitrary pairs.
        const double off = kernel.offdiag(ra, rb);
        CHECK(off * off <=
              kernel.offdiag(ra, ra) * kernel.offdiag(rb, rb) + 1e-12);

        // Rotating both arguments together changes nothing (N = 0 state).
        Eigen::Matrix3d rot = random_rotation(rng);
        CHECK(kernel.offdiag(rot * ra, rot * rb) ==
              doctest::Approx(off).epsilon(1e-10));
    }
}

TEST_CASE("kernel positivity on finite point sets") {
    const Wavefunction& wf = h2_state();
    DensityKernel kernel(wf, 0);
    RandomSource rng(41);

    const int count = 16;
    std::vector<Eigen::Vector3d> points;
    for (int i = 0; i < count; ++i)
        points.emplace_back(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2),
                            rng.uniform(-1.2, 1.2));
    Eigen::MatrixXd gram(count, count);
    for (int i = 0; i < count; ++i)
        for (int j = 0; j <= i; ++j)
            gram(i, j) = gram(j, i) = kernel.offdiag(points[static_cast<std::size_t>(i)],
                                                     points[static_cast<std::size_t>(j)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()[0] > -1e-10 * gram.trace());
}

TEST_CASE("diagonal density normalizes to one particle") {
    const Wavefunction& wf = h2_state();
    for (int particle : {0, 2}) {
        DensityKernel kernel(wf, particle);
        QuadOutcome norm = adaptive_gk(
            [&](double r) { return 4.0 * M_PI * r * r * kernel.diag(r); }, 0.0, 30.0, 1e-10,
            1e-8, 2000);
        CHECK(norm.value == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("scan structure and angle conventions") {
    const Wavefunction& wf = h2_state();
    DensityKernel kernel(wf, 0);
    DensityScan scan = suppression_scan(kernel, 0.7, 1.0);

    REQUIRE(scan.theta_deg.size() == 360);
    CHECK(scan.ratio[0] == 1.0);  // exact by construction
    CHECK(scan.diag == kernel.diag(0.7));

    // ratio(theta) = ratio(360 - theta): only the angle between R and R'
    // matters for an N = 0 state.
    for (std::size_t i = 1; i < 180; ++i)
        CHECK(scan.ratio[i] == doctest::Approx(scan.ratio[360 - i]).epsilon(1e-10));

    // The Cauchy-Schwarz bound at equal radii.
    for (double ratio : scan.ratio) CHECK(std::abs(ratio) <= 1.0 + 1e-10);

    // Identical-particle consistency between the two protons.
    DensityScan other = suppression_scan(wf, 1, 0.7, 1.0);
    for (std::size_t i = 0; i < 360; ++i)
        CHECK(scan.ratio[i] == doctest::Approx(other.ratio[i]).epsilon(1e-10));

    CHECK_THROWS_AS(suppression_scan(kernel, 0.7, 7.0), std::invalid_argument);
    CHECK_THROWS_AS(suppression_scan(kernel, 500.0, 1.0), std::runtime_error);
}

TEST_CASE("feature extraction on synthetic scans") {
    DensityScan flat;
    flat.particle = 0;
    flat.radius = 1.0;
    flat.diag = 1.0;
    for (int i = 0; i < 360; ++i) {
        flat.theta_deg.push_back(i);
        flat.offdiag.push_back(1.0);
        flat.ratio.push_back(1.0);
    }
    ScanFeatures features = extract_features(flat);
    CHECK(features.depth == 0.0);
    CHECK(features.delta180 == 0.0);
    CHECK(features.minima.empty());

    // cos-shaped dip at 90 and 270 degrees with 180-degree periodicity.
    DensityScan wave = flat;
    for (int i = 0; i < 360; ++i) {
        const double theta = i * M_PI / 180.0;
        wave.ratio[static_cast<std::size_t>(i)] = 1.0 - 0.05 * std::sin(theta) * std::sin(theta);
        wave.offdiag[static_cast<std::size_t>(i)] = wave.ratio[static_cast<std::size_t>(i)];
    }
    features = extract_features(wave);
    CHECK(features.depth == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(features.delta180 < 1e-12);
    REQUIRE(features.minima.size() == 2);
    CHECK(features.minima[0].theta_deg == doctest::Approx(90.0).epsilon(1e-6));
    CHECK(features.minima[1].theta_deg == doctest::Approx(270.0).epsilon(1e-6));
    REQUIRE(features.interior_maxima.size() == 1);
    CHECK(features.interior_maxima[0].theta_deg == doctest::Approx(180.0).epsilon(1e-6));
}

TEST_CASE("radial argmax matches a brute-force grid") {
    const Wavefunction& wf = h2_state();
    DensityKernel kernel(wf, 0);

    double brute_r = 0.0, brute_v = kernel.diag(0.0);
    for (int i = 1; i <= 2000; ++i) {
        const double r = 0.005 * i;
        if (kernel.diag(r) > brute_v) {
            brute_v = kernel.diag(r);
            brute_r = r;
        }
    }
    const double refined = radial_argmax(kernel);
    CHECK(std::abs(refined - brute_r) < 0.02);
    // Even a moderate basis puts the proton shell near 0.7 bohr.
    CHECK(refined > 0.5);
    CHECK(refined < 0.9);

    // Electron density peaks at the origin for h2; the weighted argmax is
    // what a scan would use instead.
    DensityKernel electron(wf, 2);
    CHECK(radial_argmax(electron) < 0.2);
    CHECK(radial_argmax_weighted(electron) > 0.2);
}

TEST_CASE("wrapper entry points agree with the kernel") {
    const Wavefunction& wf = h2_state();
    DensityKernel kernel(wf, 1);
    const Eigen::Vector3d ra(0.0, 0.0, 0.7);
    const Eigen::Vector3d rb(0.7, 0.0, 0.0);
    CHECK(density_offdiag(wf, 1, ra, rb) == kernel.offdiag(ra, rb));
    CHECK(density_diag(wf, 1, 0.7) == kernel.diag(0.7));
}
