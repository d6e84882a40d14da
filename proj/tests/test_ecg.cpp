#include <doctest.h>

#include <Eigen/Dense>

#include "molcoh/ecg.hpp"
#include "molcoh/random.hpp"

using namespace molcoh;

TEST_CASE("parameter map is SPD and bijective") {
    const int n = 3;
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(n * (n + 1) / 2);
    CHECK(param_to_matrix(zero, n).isIdentity(1e-14));

    RandomSource rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::VectorXd theta(n * (n + 1) / 2);
        for (int i = 0; i < theta.size(); ++i) theta[i] = rng.uniform(-2.0, 2.0);
        Eigen::MatrixXd a = param_to_matrix(theta, n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()[0] > 0.0);
        Eigen::VectorXd round = matrix_to_param(a);
        CHECK((round - theta).cwiseAbs().maxCoeff() < 1e-12);
    }

    Eigen::VectorXd big = Eigen::VectorXd::Constant(n * (n + 1) / 2, 400.0);
    CHECK_THROWS_AS(param_to_matrix(big, n), std::invalid_argument);
}

TEST_CASE("random primitives are deterministic and in range") {
    SystemDefinition sys = build_system("h2");
    CoordinateFrame frame = build_frame(sys, 0);

    RandomSource rng_a(42), rng_b(42);
    EcgPrimitive a = random_primitive(rng_a, sys, frame, 0.05, 20.0);
    EcgPrimitive b = random_primitive(rng_b, sys, frame, 0.05, 20.0);
    CHECK((a.a - b.a).cwiseAbs().maxCoeff() == 0.0);  // bit-identical for one seed

    // Every draw stays SPD; pair exponents bracket the requested range.
    RandomSource rng(1);
    const double alpha_max = 0.5 / (0.05 * 0.05);
    const double alpha_min = 0.5 / (20.0 * 20.0);
    for (int rep = 0; rep < 2000; ++rep) {
        EcgPrimitive prim = random_primitive(rng, sys, frame, 0.05, 20.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(prim.a, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()[0] > 0.0);
        // x^T A x = sum over pairs alpha_ij |r_i - r_j|^2: evaluate on a pair
        // configuration to recover one alpha and check its bounds.
        CHECK(es.eigenvalues()[0] < 6.0 * alpha_max);
        CHECK(es.eigenvalues()[2] > alpha_min);
    }
}

TEST_CASE("symmetrization projects onto the identical-pair sector") {
    RandomSource rng(9);

    SystemDefinition hehp = build_system("hehp");
    CoordinateFrame frame_h = build_frame(hehp, 0);
    EcgPrimitive prim_h = random_primitive(rng, hehp, frame_h, 0.1, 10.0);
    SymmetrizedEcg sym_h = symmetrize(prim_h, hehp, frame_h);
    REQUIRE(sym_h.terms.size() == 2);
    for (const auto& term : sym_h.terms) CHECK(term.weight == doctest::Approx(0.5));

    SystemDefinition h2 = build_system("h2");
    CoordinateFrame frame = build_frame(h2, 0);
    EcgPrimitive prim = random_primitive(rng, h2, frame, 0.1, 10.0);
    SymmetrizedEcg sym = symmetrize(prim, h2, frame);
    CHECK(sym.terms.size() <= 4);
    double total = 0.0;
    for (const auto& term : sym.terms) total += term.weight;
    CHECK(total == doctest::Approx(1.0));

    // A group-invariant matrix collapses to a single term of weight 1.
    Eigen::MatrixXd invariant = Eigen::MatrixXd::Zero(3, 3);
    for (int i = 0; i < h2.size(); ++i)
        for (int j = i + 1; j < h2.size(); ++j) {
            Eigen::VectorXd w = frame.pair_vector(i, j);
            invariant += 0.5 * w * w.transpose();
        }
    SymmetrizedEcg flat = symmetrize({invariant, 0}, h2, frame);
    REQUIRE(flat.terms.size() == 1);
    CHECK(flat.terms[0].weight == doctest::Approx(1.0));

    // Projector idempotence: re-symmetrizing any term reproduces the multiset.
    const double scale = prim.a.cwiseAbs().maxCoeff();
    for (const auto& term : sym.terms) {
        SymmetrizedEcg again = symmetrize({term.a, 0}, h2, frame);
        REQUIRE(again.terms.size() == sym.terms.size());
        for (const auto& t2 : again.terms) {
            bool found = false;
            for (const auto& t1 : sym.terms)
                found = found || (t1.a - t2.a).cwiseAbs().maxCoeff() < 1e-10 * scale;
            CHECK(found);
        }
    }
}
