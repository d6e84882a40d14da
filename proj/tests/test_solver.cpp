#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "molcoh/solver.hpp"

using namespace molcoh;

namespace {

Wavefunction small_h2(int target, std::uint64_t seed = 1) {
    SystemDefinition sys = build_system("h2");
    CoordinateFrame frame = build_frame(sys, 0);
    GrowthOptions opt;
    opt.target_size = target;
    opt.trials = 12;
    opt.seed = seed;
    return grow_basis(sys, frame, opt);
}

}  // namespace

TEST_CASE("assemble basics") {
    SystemDefinition sys = build_system("h2");
    CoordinateFrame frame = build_frame(sys, 0);
    RandomSource rng(2);

    std::vector<SymmetrizedEcg> basis;
    for (int k = 0; k < 6; ++k)
        basis.push_back(symmetrize(random_primitive(rng, sys, frame, 0.1, 10.0), sys, frame));
    AssembledMatrices mats = assemble(basis, sys, frame);

    for (int k = 0; k < 6; ++k) CHECK(mats.s(k, k) > 0.0);
    CHECK((mats.s - mats.s.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::MatrixXd h = mats.h();
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() <
          1e-13 * h.cwiseAbs().maxCoeff());

    // One function: the ground energy is the Rayleigh quotient.
    AssembledMatrices single = assemble({basis[0]}, sys, frame);
    SpectralSolution sol = solve_gevp(single.h(), single.s);
    CHECK(sol.energies[0] == doctest::Approx(single.h()(0, 0) / single.s(0, 0)).epsilon(1e-13));
}

TEST_CASE("solve_gevp reduces to the ordinary problem for S = I") {
    Eigen::MatrixXd h(3, 3);
    h << 2.0, 0.3, -0.1, 0.3, 1.0, 0.2, -0.1, 0.2, 3.0;
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(3, 3);
    SpectralSolution sol = solve_gevp(h, s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    for (int i = 0; i < 3; ++i)
        CHECK(sol.energies[i] == doctest::Approx(es.eigenvalues()[i]).epsilon(1e-13));

    // Residual of the generalized problem.
    for (int i = 0; i < 3; ++i) {
        Eigen::VectorXd c = sol.coefficients.col(i);
        CHECK((h * c - sol.energies[i] * s * c).norm() <= 1e-8 * (h * c).norm());
    }

    CHECK_THROWS_WITH_AS(solve_gevp(h, s, 2.0), "basis numerically degenerate",
                         std::runtime_error);
}

TEST_CASE("duplicates and appended functions respect the variational principle") {
    Wavefunction wf = small_h2(10);
    AssembledMatrices mats = assemble(wf.basis, wf.system, wf.frame);
    const double e0 = solve_gevp(mats.h(), mats.s).energies[0];

    // Duplicate function: span unchanged, energy unchanged.
    std::vector<SymmetrizedEcg> dup = wf.basis;
    dup.push_back(wf.basis.back());
    AssembledMatrices mats_dup = assemble(dup, wf.system, wf.frame);
    const double e_dup = solve_gevp(mats_dup.h(), mats_dup.s).energies[0];
    CHECK(e_dup == doctest::Approx(e0).epsilon(1e-10));

    // Appending any new function never raises the ground energy.
    RandomSource rng(77);
    std::vector<SymmetrizedEcg> extended = wf.basis;
    extended.push_back(
        symmetrize(random_primitive(rng, wf.system, wf.frame, 0.1, 10.0), wf.system, wf.frame));
    AssembledMatrices mats_ext = assemble(extended, wf.system, wf.frame);
    const double e_ext = solve_gevp(mats_ext.h(), mats_ext.s).energies[0];
    CHECK(e_ext <= e0 + 1e-10 * std::abs(e0));
}

TEST_CASE("growth is deterministic and monotone") {
    Wavefunction a = small_h2(16, 42);
    Wavefunction b = small_h2(16, 42);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].energy == b.history[i].energy);  // bit-identical
        CHECK(a.history[i].accepted_candidate == b.history[i].accepted_candidate);
    }
    for (std::size_t i = 1; i < a.history.size(); ++i)
        CHECK(a.history[i].energy <= a.history[i - 1].energy);

    // Stored coefficients reproduce the stored energy and unit norm.
    AssembledMatrices mats = assemble(a.basis, a.system, a.frame);
    CHECK(rayleigh_quotient(a, mats) == doctest::Approx(a.energy).epsilon(1e-10));
    CHECK(a.coefficients.dot(mats.s * a.coefficients) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("solver output is invariant under basis reordering") {
    Wavefunction wf = small_h2(12);
    AssembledMatrices mats = assemble(wf.basis, wf.system, wf.frame);
    const double e0 = solve_gevp(mats.h(), mats.s).energies[0];

    std::vector<SymmetrizedEcg> shuffled;
    for (int k : {7, 2, 9, 0, 4, 11, 1, 8, 3, 10, 6, 5})
        shuffled.push_back(wf.basis[static_cast<std::size_t>(k)]);
    AssembledMatrices mats_s = assemble(shuffled, wf.system, wf.frame);
    CHECK(solve_gevp(mats_s.h(), mats_s.s).energies[0] ==
          doctest::Approx(e0).epsilon(1e-10));
}

TEST_CASE("refinement only lowers the energy and restores the virial balance") {
    Wavefunction wf = small_h2(24);
    const double e_before = wf.energy;

    RefineOptions none;
    none.cycles = 0;
    Wavefunction untouched = wf;
    refine(untouched, none);
    CHECK(untouched.energy == wf.energy);
    CHECK(untouched.basis_size() == wf.basis_size());

    RefineOptions opt;
    opt.cycles = 1;
    refine(wf, opt);
    CHECK(wf.energy <= e_before);

    ConvergenceReport report = converge_report(wf);
    CHECK(report.virial_ratio == doctest::Approx(-2.0).epsilon(0.011));

    AssembledMatrices mats = assemble(wf.basis, wf.system, wf.frame);
    CHECK(rayleigh_quotient(wf, mats) == doctest::Approx(wf.energy).epsilon(1e-10));
}

TEST_CASE("growth history supports the doubling-based convergence measure") {
    Wavefunction wf = small_h2(48);
    ConvergenceReport report = converge_report(wf);
    CHECK(report.basis_size == 48);
    // Moderate basis: the energy gain over the last doubling is already small.
    CHECK(report.delta_rel_doubling < 0.1);
    CHECK(report.energy < -1.0);  // bound below the dissociation products
}
