#include <doctest.h>

#include <Eigen/Dense>

#include "molcoh/frame.hpp"
#include "molcoh/random.hpp"
#include "molcoh/system.hpp"

using namespace molcoh;

namespace {

Eigen::Matrix3Xd random_lab_config(RandomSource& rng, int n) {
    Eigen::Matrix3Xd r(3, n);
    for (int i = 0; i < n; ++i)
        for (int axis = 0; axis < 3; ++axis) r(axis, i) = rng.uniform(-2.0, 2.0);
    return r;
}

Eigen::Matrix3Xd ti_coords(const CoordinateFrame& frame, const Eigen::Matrix3Xd& r) {
    return r * frame.ti_block.transpose();
}

}  // namespace

TEST_CASE("presets match the studied systems") {
    SystemDefinition h2 = build_system("h2");
    REQUIRE(h2.size() == 4);
    CHECK(h2.particles[0].mass == doctest::Approx(1836.15));
    CHECK(h2.particles[1].mass == doctest::Approx(1836.15));
    CHECK(h2.particles[2].mass == 1.0);
    CHECK(h2.particles[3].mass == 1.0);
    CHECK(h2.particles[0].charge == 1.0);
    CHECK(h2.particles[3].charge == -1.0);
    REQUIRE(h2.identical_groups.size() == 2);
    CHECK(h2.identical_groups[0] == std::vector<int>{0, 1});
    CHECK(h2.identical_groups[1] == std::vector<int>{2, 3});

    SystemDefinition ps2 = build_system("ps2");
    for (const auto& p : ps2.particles) CHECK(p.mass == 1.0);
    CHECK(ps2.identical_groups.size() == 2);

    CHECK(build_system("t2").particles[0].mass == doctest::Approx(5496.92));
    CHECK(build_system("mu2").particles[0].mass == doctest::Approx(206.768));
    CHECK(build_system("d2").particles[0].mass == doctest::Approx(3670.48));

    SystemDefinition hehp = build_system("hehp");
    CHECK(hehp.particles[0].mass == doctest::Approx(7294.29954142));
    CHECK(hehp.particles[0].charge == 2.0);
    CHECK(hehp.particles[1].mass == doctest::Approx(1836.15));
    REQUIRE(hehp.identical_groups.size() == 1);
    CHECK(hehp.identical_groups[0] == std::vector<int>{2, 3});

    CHECK_THROWS_AS(build_system("xenon"), std::invalid_argument);
}

TEST_CASE("h2z scales only the nuclear charge and warns when unbound") {
    std::string warning;
    SystemDefinition sys = build_system_h2z(1.65, &warning);
    CHECK(warning.empty());
    CHECK(sys.particles[0].charge == doctest::Approx(1.65));
    CHECK(sys.particles[0].mass == doctest::Approx(1836.15));
    CHECK(sys.particles[2].charge == -1.0);

    SystemDefinition unbound = build_system_h2z(2.5, &warning);
    CHECK(!warning.empty());
    CHECK(unbound.particles[0].charge == doctest::Approx(2.5));
}

TEST_CASE("two equal masses give the midpoint coordinate") {
    SystemDefinition sys = make_system({{5.0, 1.0, "a"}, {5.0, -1.0, "b"}}, {});
    CoordinateFrame frame = build_frame(sys, 0);
    REQUIRE(frame.n_coords() == 1);
    CHECK(frame.ti_block(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(frame.ti_block(0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("frame reconstruction identities") {
    RandomSource rng(11);
    for (const char* preset : {"h2", "hehp", "ps2"}) {
        SystemDefinition sys = build_system(preset);
        for (int ref = 0; ref < sys.size(); ++ref) {
            CoordinateFrame frame = build_frame(sys, ref);

            // Rows of the transform sum to zero (translation invariance).
            for (int k = 0; k < frame.n_coords(); ++k)
                CHECK(std::abs(frame.ti_block.row(k).sum()) < 1e-12);

            // The mass matrix is SPD.
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(frame.mass_matrix);
            CHECK(es.eigenvalues()[0] > 0.0);

            // Coordinate 0 is the reference particle relative to the cm.
            Eigen::VectorXd uref = frame.cm_vector(ref);
            CHECK(std::abs(uref[0] - 1.0) < 1e-12);
            for (int k = 1; k < frame.n_coords(); ++k) CHECK(std::abs(uref[k]) < 1e-12);

            // Reconstruction from a random lab configuration.
            Eigen::Matrix3Xd r = random_lab_config(rng, sys.size());
            Eigen::Vector3d cm = Eigen::Vector3d::Zero();
            double mass = 0.0;
            for (int i = 0; i < sys.size(); ++i) {
                cm += sys.particles[static_cast<std::size_t>(i)].mass * r.col(i);
                mass += sys.particles[static_cast<std::size_t>(i)].mass;
            }
            cm /= mass;
            Eigen::Matrix3Xd x = ti_coords(frame, r);
            for (int i = 0; i < sys.size(); ++i) {
                Eigen::Vector3d rebuilt = x * frame.cm_vector(i);
                CHECK((rebuilt - (r.col(i) - cm)).norm() < 1e-12);
            }

            // Pair vectors are differences of cm vectors, exactly.
            for (int i = 0; i < sys.size(); ++i)
                for (int j = i + 1; j < sys.size(); ++j) {
                    Eigen::VectorXd w = frame.pair_vector(i, j);
                    Eigen::VectorXd diff = frame.cm_vector(i) - frame.cm_vector(j);
                    CHECK((w - diff).norm() == 0.0);
                }
        }
    }
}

TEST_CASE("permutation action represents relabeling on coordinates") {
    SystemDefinition sys = build_system("h2");
    CoordinateFrame frame = build_frame(sys, 0);
    RandomSource rng(23);

    const std::vector<int> identity = {0, 1, 2, 3};
    CHECK(permutation_action(identity, sys, frame).isIdentity(1e-14));

    const std::vector<int> eswap = {0, 1, 3, 2};
    Eigen::MatrixXd p = permutation_action(eswap, sys, frame);
    CHECK((p * p).isIdentity(1e-12));

    // Relabeled configuration transforms by P.
    const std::vector<int> nswap = {1, 0, 3, 2};
    Eigen::MatrixXd pn = permutation_action(nswap, sys, frame);
    Eigen::Matrix3Xd r = random_lab_config(rng, 4);
    Eigen::Matrix3Xd permuted(3, 4);
    for (int i = 0; i < 4; ++i) permuted.col(i) = r.col(nswap[static_cast<std::size_t>(i)]);
    Eigen::Matrix3Xd lhs = ti_coords(frame, permuted);
    Eigen::Matrix3Xd rhs = ti_coords(frame, r) * pn.transpose();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);

    // Homomorphism over the symmetry group.
    for (const auto& sigma : symmetry_group(sys))
        for (const auto& tau : symmetry_group(sys)) {
            Eigen::MatrixXd lhs2 = permutation_action(perm_compose(sigma, tau), sys, frame);
            Eigen::MatrixXd rhs2 =
                permutation_action(sigma, sys, frame) * permutation_action(tau, sys, frame);
            CHECK((lhs2 - rhs2).cwiseAbs().maxCoeff() < 1e-12);
        }

    CHECK_THROWS_AS(permutation_action({2, 1, 0, 3}, sys, frame), std::invalid_argument);
}

TEST_CASE("frame transforms preserve the quadratic form") {
    SystemDefinition sys = build_system("hehp");
    CoordinateFrame src = build_frame(sys, 0);
    CoordinateFrame dst = build_frame(sys, 1);
    RandomSource rng(37);

    Eigen::MatrixXd a = Eigen::MatrixXd::Random(3, 3);
    a = (a * a.transpose()).eval() + Eigen::MatrixXd::Identity(3, 3);

    CHECK((frame_transform(a, src, src) - a).cwiseAbs().maxCoeff() < 1e-13);

    Eigen::MatrixXd a_dst = frame_transform(a, src, dst);
    Eigen::MatrixXd back = frame_transform(a_dst, dst, src);
    CHECK((back - a).cwiseAbs().maxCoeff() < 1e-12);

    for (int rep = 0; rep < 5; ++rep) {
        Eigen::Matrix3Xd r = random_lab_config(rng, sys.size());
        Eigen::Matrix3Xd xs = ti_coords(src, r);
        Eigen::Matrix3Xd xd = ti_coords(dst, r);
        double qs = 0.0, qd = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                qs += a(i, j) * xs.col(i).dot(xs.col(j));
                qd += a_dst(i, j) * xd.col(i).dot(xd.col(j));
            }
        CHECK(qd == doctest::Approx(qs).epsilon(1e-12));
    }
}
