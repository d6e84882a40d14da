#include "molcoh/oracle_suite.hpp"

#include <cmath>

#include "molcoh/density.hpp"
#include "molcoh/oracle.hpp"
#include "molcoh/solver.hpp"

namespace molcoh {

namespace {

OracleCheck relative_check(const std::string& name, double analytic, double numeric,
                           double rel_gate) {
    OracleCheck check{name, analytic, numeric, rel_gate * std::abs(analytic), false};
    check.pass = std::abs(analytic - numeric) <= check.error_bound;
    return check;
}

OracleCheck sigma_check(const std::string& name, double analytic, const QuadOutcome& mc) {
    OracleCheck check{name, analytic, mc.value, 3.0 * mc.error, false};
    check.pass = std::abs(analytic - mc.value) <= check.error_bound;
    return check;
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(std::uint64_t seed) {
    std::vector<OracleCheck> checks;
    RandomSource rng(seed);
    constexpr double kGate = 1e-6;

    // Two equal-mass particles: one coordinate, radial quadrature.
    {
        SystemDefinition sys = make_system(
            {{1.0, 1.0, "a"}, {1.0, -1.0, "b"}}, {});
        CoordinateFrame frame = build_frame(sys, 0);
        for (int rep = 0; rep < 2; ++rep) {
            EcgPrimitive pf = random_primitive(rng, sys, frame, 0.2, 5.0);
            EcgPrimitive pg = random_primitive(rng, sys, frame, 0.2, 5.0);
            SymmetrizedEcg f = symmetrize(pf, sys, frame);
            SymmetrizedEcg g = symmetrize(pg, sys, frame);
            const auto tag = "n1[" + std::to_string(rep) + "] ";
            checks.push_back(relative_check(tag + "overlap", overlap(f, g),
                                            oracle_overlap(f, g).value, kGate));
            checks.push_back(relative_check(tag + "kinetic", kinetic(f, g, frame.mass_matrix),
                                            oracle_kinetic(f, g, frame.mass_matrix).value,
                                            kGate));
            const auto pair = coulomb_pairs(sys, frame).at(0);
            checks.push_back(relative_check(tag + "coulomb", coulomb_pair(f, g, pair),
                                            oracle_coulomb(f, g, pair).value, kGate));
        }
    }

    // Three pseudo-particles with one identical pair: two coordinates. The
    // moderate mass ratio keeps both coordinates on comparable length scales.
    {
        SystemDefinition sys = make_system(
            {{5.0, 2.0, "core"}, {1.0, -1.0, "e1"}, {1.0, -1.0, "e2"}}, {{1, 2}});
        CoordinateFrame frame = build_frame(sys, 0);
        EcgPrimitive pf = random_primitive(rng, sys, frame, 0.3, 4.0);
        EcgPrimitive pg = random_primitive(rng, sys, frame, 0.3, 4.0);
        SymmetrizedEcg f = symmetrize(pf, sys, frame);
        SymmetrizedEcg g = symmetrize(pg, sys, frame);
        checks.push_back(relative_check("n2 overlap", overlap(f, g),
                                        oracle_overlap(f, g).value, kGate));
        checks.push_back(relative_check("n2 kinetic", kinetic(f, g, frame.mass_matrix),
                                        oracle_kinetic(f, g, frame.mass_matrix).value, kGate));
        for (const auto& pair : coulomb_pairs(sys, frame)) {
            const auto name = "n2 coulomb(" + std::to_string(pair.i) + "," +
                              std::to_string(pair.j) + ")";
            checks.push_back(relative_check(name, coulomb_pair(f, g, pair),
                                            oracle_coulomb(f, g, pair).value, kGate));
        }
        MatrixElementPair element = hamiltonian_element(f, g, sys, frame);
        checks.push_back(relative_check("n2 hamiltonian", element.h(),
                                        oracle_hamiltonian(f, g, sys, frame).value, kGate));

        // Density kernel against direct quadrature of the traced coordinate.
        Wavefunction wf;
        wf.system = sys;
        wf.frame = frame;
        wf.generators = {pf.a, pg.a};
        wf.basis = {f, g};
        AssembledMatrices mats = assemble(wf.basis, sys, frame);
        SpectralSolution sol = solve_gevp(mats.h(), mats.s);
        wf.coefficients = sol.coefficients.col(0);
        wf.energy = sol.energies[0];

        DensityKernel kernel(wf, 0);
        std::vector<WeightedTerm> flat;
        for (int k = 0; k < wf.basis_size(); ++k)
            for (const auto& term : wf.basis[static_cast<std::size_t>(k)].terms)
                flat.push_back({wf.coefficients[k] * term.weight, term.a});
        const Eigen::Vector3d r_bra(0.0, 0.0, 0.8);
        const Eigen::Vector3d r_ket(0.55, 0.0, 0.4);
        QuadOutcome direct = oracle_density_offdiag(flat, flat, r_bra, r_ket);
        const double norm = overlap(wf.basis[0], wf.basis[0]) * wf.coefficients[0] *
                                wf.coefficients[0] +
                            2.0 * overlap(wf.basis[0], wf.basis[1]) * wf.coefficients[0] *
                                wf.coefficients[1] +
                            overlap(wf.basis[1], wf.basis[1]) * wf.coefficients[1] *
                                wf.coefficients[1];
        checks.push_back(relative_check("n2 density kernel", kernel.offdiag(r_bra, r_ket),
                                        direct.value / norm, kGate));
    }

    // Four particles: three coordinates, sampled with reported standard error.
    {
        SystemDefinition sys = build_system("h2");
        CoordinateFrame frame = build_frame(sys, 0);
        EcgPrimitive pf = random_primitive(rng, sys, frame, 0.3, 3.0);
        EcgPrimitive pg = random_primitive(rng, sys, frame, 0.3, 3.0);
        SymmetrizedEcg f = symmetrize(pf, sys, frame);
        SymmetrizedEcg g = symmetrize(pg, sys, frame);
        checks.push_back(sigma_check("n3 overlap (qmc)", overlap(f, g), oracle_overlap(f, g)));
        checks.push_back(sigma_check("n3 kinetic (qmc)", kinetic(f, g, frame.mass_matrix),
                                     oracle_kinetic(f, g, frame.mass_matrix)));
        const auto pairs = coulomb_pairs(sys, frame);
        checks.push_back(sigma_check("n3 coulomb nn (qmc)", coulomb_pair(f, g, pairs.at(0)),
                                     oracle_coulomb(f, g, pairs.at(0))));
        checks.push_back(sigma_check("n3 coulomb ne (qmc)", coulomb_pair(f, g, pairs.at(1)),
                                     oracle_coulomb(f, g, pairs.at(1))));
    }

    return checks;
}

}  // namespace molcoh
