#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "molcoh/integrals.hpp"
#include "molcoh/oracle.hpp"
#include "molcoh/oracle_suite.hpp"
#include "molcoh/random.hpp"

using namespace molcoh;

namespace {

SymmetrizedEcg plain(const Eigen::MatrixXd& a, int frame_ref = 0) {
    return SymmetrizedEcg{{{1.0, a}}, frame_ref};
}

SymmetrizedEcg scaled_terms(const SymmetrizedEcg& f, double s) {
    SymmetrizedEcg out = f;
    for (auto& term : out.terms) term.a *= s;
    return out;
}

}  // namespace

TEST_CASE("single-coordinate closed forms") {
    Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 1.0);
    SymmetrizedEcg f = plain(one);
    CHECK(overlap(f, f) == doctest::Approx(std::pow(M_PI / 2.0, 1.5)).epsilon(1e-12));

    // <T> per unit norm for A = a and Lambda = 1/(2 mu) is 3a/(2 mu).
    const double a = 0.8, mu = 0.5;
    SymmetrizedEcg g = plain(Eigen::MatrixXd::Constant(1, 1, a));
    Eigen::MatrixXd lambda = Eigen::MatrixXd::Constant(1, 1, 1.0 / (2.0 * mu));
    CHECK(kinetic(g, g, lambda) / overlap(g, g) ==
          doctest::Approx(3.0 * a / (2.0 * mu)).epsilon(1e-12));

    // <1/r> per unit norm for A = a and w = 1 is 2 sqrt(2a/pi).
    PairInteraction pair{0, 1, 1.0, Eigen::VectorXd::Constant(1, 1.0)};
    CHECK(coulomb_pair(g, g, pair) / overlap(g, g) ==
          doctest::Approx(2.0 * std::sqrt(2.0 * a / M_PI)).epsilon(1e-12));

    PairInteraction repulsive{0, 1, -1.0, Eigen::VectorXd::Constant(1, 1.0)};
    CHECK(coulomb_pair(g, g, repulsive) < 0.0);

    PairInteraction degenerate{0, 1, 1.0, Eigen::VectorXd::Zero(1)};
    CHECK_THROWS_AS(coulomb_pair(g, g, degenerate), std::invalid_argument);
}

TEST_CASE("symmetry and positivity of matrix elements") {
    SystemDefinition sys = build_system("h2");
    CoordinateFrame frame = build_frame(sys, 0);
    RandomSource rng(3);

    for (int rep = 0; rep < 10; ++rep) {
        SymmetrizedEcg f = symmetrize(random_primitive(rng, sys, frame, 0.1, 10.0), sys, frame);
        SymmetrizedEcg g = symmetrize(random_primitive(rng, sys, frame, 0.1, 10.0), sys, frame);
        CHECK(overlap(f, g) == doctest::Approx(overlap(g, f)).epsilon(1e-14));
        CHECK(kinetic(f, f, frame.mass_matrix) > 0.0);

        MatrixElementPair fg = hamiltonian_element(f, g, sys, frame);
        MatrixElementPair gf = hamiltonian_element(g, f, sys, frame);
        CHECK(fg.h() == doctest::Approx(gf.h()).epsilon(1e-13));
    }

    // Charge signs on an h2 diagonal element.
    SymmetrizedEcg f = symmetrize(random_primitive(rng, sys, frame, 0.3, 5.0), sys, frame);
    CHECK(hamiltonian_element(f, f, sys, frame).t > 0.0);
    for (const auto& pair : coulomb_pairs(sys, frame)) {
        const double value = coulomb_pair(f, f, pair);
        if (pair.prefactor > 0.0)
            CHECK(value > 0.0);
        else
            CHECK(value < 0.0);
    }
}

TEST_CASE("scaling law for all integral families") {
    SystemDefinition sys = build_system("hehp");
    CoordinateFrame frame = build_frame(sys, 0);
    RandomSource rng(17);
    const int n = frame.n_coords();

    for (double s : {0.37, 1.0, 2.9}) {
        SymmetrizedEcg f = symmetrize(random_primitive(rng, sys, frame, 0.2, 8.0), sys, frame);
        SymmetrizedEcg g = symmetrize(random_primitive(rng, sys, frame, 0.2, 8.0), sys, frame);
        SymmetrizedEcg fs = scaled_terms(f, s);
        SymmetrizedEcg gs = scaled_terms(g, s);

        CHECK(overlap(fs, gs) ==
              doctest::Approx(std::pow(s, -1.5 * n) * overlap(f, g)).epsilon(1e-11));
        CHECK(kinetic(fs, gs, frame.mass_matrix) ==
              doctest::Approx(std::pow(s, -1.5 * n + 1.0) * kinetic(f, g, frame.mass_matrix))
                  .epsilon(1e-11));
        const auto pair = coulomb_pairs(sys, frame).at(1);
        CHECK(coulomb_pair(fs, gs, pair) ==
              doctest::Approx(std::pow(s, -1.5 * n + 0.5) * coulomb_pair(f, g, pair))
                  .epsilon(1e-11));
    }
}

TEST_CASE("overlap matrices are positive semidefinite") {
    SystemDefinition sys = build_system("ps2");
    CoordinateFrame frame = build_frame(sys, 0);
    RandomSource rng(29);

    const int m = 12;
    std::vector<SymmetrizedEcg> basis;
    for (int k = 0; k < m; ++k)
        basis.push_back(symmetrize(random_primitive(rng, sys, frame, 0.05, 40.0), sys, frame));
    Eigen::MatrixXd s(m, m);
    for (int k = 0; k < m; ++k)
        for (int l = 0; l <= k; ++l) s(k, l) = s(l, k) = overlap(basis[k], basis[l]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()[0] > -1e-10 * es.eigenvalues()[m - 1]);
}

TEST_CASE("integrals are frame invariant up to the transform determinant") {
    SystemDefinition sys = build_system("hehp");
    CoordinateFrame src = build_frame(sys, 0);
    CoordinateFrame dst = build_frame(sys, 2);
    RandomSource rng(31);

    SymmetrizedEcg f = symmetrize(random_primitive(rng, sys, src, 0.2, 6.0), sys, src);
    SymmetrizedEcg g = symmetrize(random_primitive(rng, sys, src, 0.2, 6.0), sys, src);

    auto to_dst = [&](const SymmetrizedEcg& in) {
        SymmetrizedEcg out = in;
        out.frame_ref = dst.reference_particle;
        for (auto& term : out.terms) term.a = frame_transform(term.a, src, dst);
        return out;
    };
    SymmetrizedEcg fd = to_dst(f);
    SymmetrizedEcg gd = to_dst(g);

    // Plain integrals over each frame's own coordinates differ by the cube of
    // the transform determinant; normalized quantities are frame invariant.
    const double jac = std::pow(std::abs(frame_transform_matrix(src, dst).determinant()), 3.0);
    CHECK(overlap(fd, gd) / jac == doctest::Approx(overlap(f, g)).epsilon(1e-10));
    CHECK(kinetic(fd, gd, dst.mass_matrix) / jac ==
          doctest::Approx(kinetic(f, g, src.mass_matrix)).epsilon(1e-10));
    const auto pair_src = coulomb_pairs(sys, src).at(3);
    const auto pair_dst = coulomb_pairs(sys, dst).at(3);
    CHECK(coulomb_pair(fd, gd, pair_dst) / jac ==
          doctest::Approx(coulomb_pair(f, g, pair_src)).epsilon(1e-10));

    MatrixElementPair e_src = hamiltonian_element(f, g, sys, src);
    MatrixElementPair e_dst = hamiltonian_element(fd, gd, sys, dst);
    CHECK(e_dst.h() / e_dst.s == doctest::Approx(e_src.h() / e_src.s).epsilon(1e-9));
}

TEST_CASE("oracle self-checks") {
    // One-coordinate overlap against the shared closed form, and determinism.
    Eigen::MatrixXd a = Eigen::MatrixXd::Constant(1, 1, 0.7);
    Eigen::MatrixXd b = Eigen::MatrixXd::Constant(1, 1, 1.9);
    SymmetrizedEcg f = plain(a), g = plain(b);
    QuadOutcome first = oracle_overlap(f, g);
    CHECK(first.converged);
    CHECK(first.value == doctest::Approx(std::pow(M_PI / 2.6, 1.5)).epsilon(1e-8));
    QuadOutcome second = oracle_overlap(f, g);
    CHECK(first.value == second.value);  // deterministic for fixed settings
    CHECK(first.evaluations == second.evaluations);
}

TEST_CASE("closed forms agree with the quadrature oracle") {
    auto checks = run_oracle_suite(7);
    REQUIRE(!checks.empty());
    for (const auto& check : checks) {
        INFO(check.name, ": analytic ", check.analytic, " vs oracle ", check.numeric,
             " bound ", check.error_bound);
        CHECK(check.pass);
    }
}
