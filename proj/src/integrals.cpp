#include "molcoh/integrals.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace molcoh {

namespace {

struct TermPair {
    double ww = 0.0;          // product of symmetrization weights
    double s = 0.0;           // overlap of the primitive pair
    Eigen::LLT<Eigen::MatrixXd> llt;  // Cholesky of B = A_f + A_g
};

TermPair term_pair(const SymTerm& f, const SymTerm& g) {
    TermPair tp;
    tp.ww = f.weight * g.weight;
    Eigen::MatrixXd b = f.a + g.a;
    tp.llt.compute(b);
    assert(tp.llt.info() == Eigen::Success && "sum of SPD exponent matrices must be SPD");
    const int n = static_cast<int>(b.rows());
    double log_det = 0.0;
    for (int i = 0; i < n; ++i) log_det += std::log(tp.llt.matrixL()(i, i));
    log_det *= 2.0;
    tp.s = std::exp(1.5 * (static_cast<double>(n) * std::log(M_PI) - log_det));
    return tp;
}

void check_same_frame(const SymmetrizedEcg& f, const SymmetrizedEcg& g) {
    if (f.frame_ref != g.frame_ref)
        throw std::invalid_argument("operands live in different frames");
    if (f.terms.empty() || g.terms.empty())
        throw std::invalid_argument("empty symmetrized function");
}

double kinetic_term(const TermPair& tp, const SymTerm& f, const SymTerm& g,
                    const Eigen::MatrixXd& lambda) {
    // 6 Tr(Lambda A_f B^-1 A_g) per unit overlap.
    Eigen::MatrixXd binv_ag = tp.llt.solve(g.a);
    return 6.0 * (lambda * f.a * binv_ag).trace() * tp.s;
}

double coulomb_term(const TermPair& tp, const Eigen::VectorXd& w) {
    const double c = w.dot(tp.llt.solve(w));
    assert(c > 0.0 && "B^-1 is SPD and w != 0");
    return tp.s * 2.0 / (std::sqrt(M_PI) * std::sqrt(c));
}

}  // namespace

std::vector<PairInteraction> coulomb_pairs(const SystemDefinition& system,
                                           const CoordinateFrame& frame) {
    std::vector<PairInteraction> pairs;
    for (int i = 0; i < system.size(); ++i) {
        for (int j = i + 1; j < system.size(); ++j) {
            PairInteraction p;
            p.i = i;
            p.j = j;
            p.prefactor = system.particles[static_cast<std::size_t>(i)].charge *
                          system.particles[static_cast<std::size_t>(j)].charge;
            p.w = frame.pair_vector(i, j);
            pairs.push_back(std::move(p));
        }
    }
    return pairs;
}

double overlap(const SymmetrizedEcg& f, const SymmetrizedEcg& g) {
    check_same_frame(f, g);
    double total = 0.0;
    for (const auto& tf : f.terms)
        for (const auto& tg : g.terms) {
            TermPair tp = term_pair(tf, tg);
            total += tp.ww * tp.s;
        }
    return total;
}

double kinetic(const SymmetrizedEcg& f, const SymmetrizedEcg& g,
               const Eigen::MatrixXd& mass_matrix) {
    check_same_frame(f, g);
    double total = 0.0;
    for (const auto& tf : f.terms)
        for (const auto& tg : g.terms) {
            TermPair tp = term_pair(tf, tg);
            total += tp.ww * kinetic_term(tp, tf, tg, mass_matrix);
        }
    return total;
}

double coulomb_pair(const SymmetrizedEcg& f, const SymmetrizedEcg& g,
                    const PairInteraction& interaction) {
    check_same_frame(f, g);
    if (interaction.w.squaredNorm() == 0.0)
        throw std::invalid_argument("pair vector must not vanish");
    double total = 0.0;
    for (const auto& tf : f.terms)
        for (const auto& tg : g.terms) {
            TermPair tp = term_pair(tf, tg);
            total += tp.ww * coulomb_term(tp, interaction.w);
        }
    return interaction.prefactor * total;
}

MatrixElementPair hamiltonian_element(const SymmetrizedEcg& f, const SymmetrizedEcg& g,
                                      const Eigen::MatrixXd& mass_matrix,
                                      const std::vector<PairInteraction>& pairs) {
    check_same_frame(f, g);
    MatrixElementPair out;
    for (const auto& tf : f.terms) {
        for (const auto& tg : g.terms) {
            TermPair tp = term_pair(tf, tg);
            out.s += tp.ww * tp.s;
            out.t += tp.ww * kinetic_term(tp, tf, tg, mass_matrix);
            for (const auto& pair : pairs)
                out.v += tp.ww * pair.prefactor * coulomb_term(tp, pair.w);
        }
    }
    return out;
}

MatrixElementPair hamiltonian_element(const SymmetrizedEcg& f, const SymmetrizedEcg& g,
                                      const SystemDefinition& system,
                                      const CoordinateFrame& frame) {
    return hamiltonian_element(f, g, frame.mass_matrix, coulomb_pairs(system, frame));
}

}  // namespace molcoh
