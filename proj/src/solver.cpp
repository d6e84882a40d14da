#include "molcoh/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace molcoh {

namespace {

constexpr double kGolden = 0.61803398874989484820;

struct ReducedSpectrum {
    Eigen::MatrixXd map;  // fixed-function coefficients per eigenstate, S-orthonormal
    Eigen::VectorXd eps;  // energies, ascending
    double overlap_condition = 1.0;
};

/// Canonical orthogonalization of the subproblem that excludes basis index
/// `excluded` (-1 for none), followed by the projected eigensolve.
ReducedSpectrum reduce(const Eigen::MatrixXd& s, const Eigen::MatrixXd& h, int excluded,
                       double tau) {
    const int m = static_cast<int>(s.rows());
    std::vector<int> fixed;
    fixed.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        if (i != excluded) fixed.push_back(i);
    const int mf = static_cast<int>(fixed.size());

    ReducedSpectrum red;
    if (mf == 0) return red;

    Eigen::MatrixXd sff(mf, mf), hff(mf, mf);
    for (int a = 0; a < mf; ++a)
        for (int b = 0; b < mf; ++b) {
            sff(a, b) = s(fixed[static_cast<std::size_t>(a)], fixed[static_cast<std::size_t>(b)]);
            hff(a, b) = h(fixed[static_cast<std::size_t>(a)], fixed[static_cast<std::size_t>(b)]);
        }

    Eigen::VectorXd scale = sff.diagonal().cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd s_tilde = scale.asDiagonal() * sff * scale.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s_tilde);
    const Eigen::VectorXd& w = es.eigenvalues();
    const double w_max = w[mf - 1];
    if (!(w_max > 0.0)) throw std::runtime_error("basis numerically degenerate");

    int first = 0;
    while (first < mf && w[first] < tau * w_max) ++first;
    const int r = mf - first;
    if (r == 0) throw std::runtime_error("basis numerically degenerate");

    Eigen::MatrixXd x = scale.asDiagonal() * es.eigenvectors().rightCols(r) *
                        w.tail(r).cwiseSqrt().cwiseInverse().asDiagonal();
    Eigen::MatrixXd projected = x.transpose() * hff * x;
    projected = 0.5 * (projected + projected.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eh(projected);

    red.map = x * eh.eigenvectors();
    red.eps = eh.eigenvalues();
    red.overlap_condition = w_max / w[first];
    return red;
}

/// Lowest eigenvalue of the symmetric arrowhead [[diag(eps), b], [b^T, d]]
/// via bisection on the secular function below the first coupled pole.
double arrowhead_ground(const Eigen::VectorXd& eps, const Eigen::VectorXd& b, double d) {
    const int r = static_cast<int>(eps.size());
    if (r == 0) return d;

    double scale = std::abs(d);
    for (int i = 0; i < r; ++i) scale = std::max(scale, std::abs(eps[i]));
    scale = std::max(scale, 1.0);

    std::vector<int> live;
    double deflated_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < r; ++i) {
        if (std::abs(b[i]) > 1e-14 * scale)
            live.push_back(i);
        else
            deflated_min = std::min(deflated_min, eps[i]);
    }
    if (live.empty()) return std::min(d, eps[0]);

    double pole = std::numeric_limits<double>::infinity();
    for (int i : live) pole = std::min(pole, eps[i]);

    auto secular = [&](double lambda) {
        double f = d - lambda;
        for (int i : live) f -= b[i] * b[i] / (eps[i] - lambda);
        return f;
    };

    double lo = std::min(d, eps[0]) - b.norm() - 1.0;
    double hi = pole - 1e-14 * scale;
    if (secular(hi) >= 0.0) return std::min(pole, deflated_min);
    for (int it = 0; it < 200 && hi - lo > 1e-16 * scale; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (secular(mid) > 0.0 ? lo : hi) = mid;
    }
    return std::min(0.5 * (lo + hi), deflated_min);
}

/// Ground energy of the full problem with one extra function appended, given
/// the reduced spectrum of the fixed part. Returns nothing when the new
/// function is numerically inside the span of the fixed ones.
std::optional<double> bordered_ground(const ReducedSpectrum& red, const Eigen::VectorXd& s_row,
                                      const Eigen::VectorXd& h_row, double s_dd, double h_dd) {
    if (red.eps.size() == 0) return h_dd / s_dd;
    const Eigen::VectorXd st = red.map.transpose() * s_row;
    const Eigen::VectorXd ht = red.map.transpose() * h_row;
    const double gamma2 = s_dd - st.squaredNorm();
    if (!(gamma2 > 1e-10 * s_dd)) return std::nullopt;
    const double gamma = std::sqrt(gamma2);
    const Eigen::VectorXd b = (ht - red.eps.cwiseProduct(st)) / gamma;
    const double d = (h_dd - 2.0 * st.dot(ht) + st.cwiseProduct(st).dot(red.eps)) / gamma2;
    return arrowhead_ground(red.eps, b, d);
}

struct Engine {
    const SystemDefinition& system;
    const CoordinateFrame& frame;
    std::vector<PairInteraction> pairs;
    Eigen::MatrixXd s, t, v;  // active m x m blocks
    int m = 0;

    Engine(const SystemDefinition& sys, const CoordinateFrame& fr, int capacity)
        : system(sys), frame(fr), pairs(coulomb_pairs(sys, fr)) {
        s.resize(capacity, capacity);
        t.resize(capacity, capacity);
        v.resize(capacity, capacity);
    }

    void ensure_capacity(int size) {
        if (size <= s.rows()) return;
        const int cap = std::max(size, static_cast<int>(s.rows()) * 2);
        auto grow = [&](Eigen::MatrixXd& mat) {
            Eigen::MatrixXd next(cap, cap);
            next.topLeftCorner(m, m) = mat.topLeftCorner(m, m);
            mat.swap(next);
        };
        grow(s);
        grow(t);
        grow(v);
    }

    /// Matrix elements of one candidate against functions [0, count) plus its
    /// diagonal; writes s/t/v rows of length count+1 (diagonal last).
    void candidate_row(const SymmetrizedEcg& cand, const std::vector<SymmetrizedEcg>& funcs,
                       int count, Eigen::VectorXd& s_row, Eigen::VectorXd& t_row,
                       Eigen::VectorXd& v_row) const {
        s_row.resize(count + 1);
        t_row.resize(count + 1);
        v_row.resize(count + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
        for (int l = 0; l < count; ++l) {
            MatrixElementPair e =
                hamiltonian_element(funcs[static_cast<std::size_t>(l)], cand, frame.mass_matrix, pairs);
            s_row[l] = e.s;
            t_row[l] = e.t;
            v_row[l] = e.v;
        }
        MatrixElementPair diag = hamiltonian_element(cand, cand, frame.mass_matrix, pairs);
        s_row[count] = diag.s;
        t_row[count] = diag.t;
        v_row[count] = diag.v;
    }

    void write_row(int k, const Eigen::VectorXd& s_row, const Eigen::VectorXd& t_row,
                   const Eigen::VectorXd& v_row) {
        const int len = static_cast<int>(s_row.size());
        for (int l = 0; l < len; ++l) {
            s(k, l) = s(l, k) = s_row[l];
            t(k, l) = t(l, k) = t_row[l];
            v(k, l) = v(l, k) = v_row[l];
        }
    }

    Eigen::MatrixXd h() const { return t.topLeftCorner(m, m) + v.topLeftCorner(m, m); }

    SpectralSolution solve(double tau) const {
        return solve_gevp(h(), s.topLeftCorner(m, m), tau);
    }
};

void load_engine(Engine& eng, const Wavefunction& wf) {
    eng.ensure_capacity(wf.basis_size());
    AssembledMatrices mats = assemble(wf.basis, wf.system, wf.frame);
    eng.m = wf.basis_size();
    eng.s.topLeftCorner(eng.m, eng.m) = mats.s;
    eng.t.topLeftCorner(eng.m, eng.m) = mats.t;
    eng.v.topLeftCorner(eng.m, eng.m) = mats.v;
}

struct SweepOutcome {
    Eigen::MatrixXd gen;
    SymmetrizedEcg func;
    double energy = 0.0;
};

/// Golden-section line search over every parameter of one basis function
/// against the reduced spectrum of the others; brackets are re-centered when
/// an optimum lands on the edge. Returns the improved generator, or nothing.
std::optional<SweepOutcome> parameter_sweep(const Engine& eng, const ReducedSpectrum& red,
                                            const std::vector<SymmetrizedEcg>& fixed,
                                            const SystemDefinition& system,
                                            const CoordinateFrame& frame,
                                            const Eigen::MatrixXd& gen0, double window,
                                            double param_tol) {
    const int count = static_cast<int>(fixed.size());
    auto eval = [&](const Eigen::VectorXd& th) {
        Eigen::MatrixXd gen;
        try {
            gen = param_to_matrix(th, frame.n_coords());
        } catch (const std::invalid_argument&) {
            return std::numeric_limits<double>::infinity();
        }
        SymmetrizedEcg cand = symmetrize({gen, frame.reference_particle}, system, frame);
        Eigen::VectorXd s_row, t_row, v_row;
        eng.candidate_row(cand, fixed, count, s_row, t_row, v_row);
        auto e = bordered_ground(red, s_row.head(count), t_row.head(count) + v_row.head(count),
                                 s_row[count], t_row[count] + v_row[count]);
        return e ? *e : std::numeric_limits<double>::infinity();
    };

    Eigen::VectorXd theta = matrix_to_param(gen0);
    double e_local = eval(theta);
    bool changed = false;
    for (int p = 0; p < theta.size(); ++p) {
        auto probe = [&](double delta) {
            Eigen::VectorXd th = theta;
            th[p] += delta;
            return eval(th);
        };
        double center = 0.0;
        double best_delta = 0.0, best_val = e_local;
        for (int round = 0; round < 3; ++round) {
            double a = center - window, b = center + window;
            double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
            double f1 = probe(x1), f2 = probe(x2);
            while (b - a > param_tol) {
                if (f1 <= f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - kGolden * (b - a);
                    f1 = probe(x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + kGolden * (b - a);
                    f2 = probe(x2);
                }
            }
            best_delta = f1 <= f2 ? x1 : x2;
            best_val = std::min(f1, f2);
            if (std::abs(best_delta - center) < 0.8 * window) break;
            center = best_delta;
        }
        if (best_val < e_local - 1e-13 * std::abs(e_local)) {
            theta[p] += best_delta;
            e_local = best_val;
            changed = true;
        }
    }
    if (!changed) return std::nullopt;

    SweepOutcome out;
    out.gen = param_to_matrix(theta, frame.n_coords());
    out.func = symmetrize({out.gen, frame.reference_particle}, system, frame);
    out.energy = e_local;
    return out;
}

void store_solution(Wavefunction& wf, const Engine& eng, const SpectralSolution& sol) {
    wf.coefficients = sol.coefficients.col(0);
    wf.energy = sol.energies[0];
}

}  // namespace

AssembledMatrices assemble(const std::vector<SymmetrizedEcg>& basis,
                           const SystemDefinition& system, const CoordinateFrame& frame) {
    if (basis.empty()) throw std::invalid_argument("assemble: empty basis");
    const int m = static_cast<int>(basis.size());
    AssembledMatrices mats;
    mats.s.resize(m, m);
    mats.t.resize(m, m);
    mats.v.resize(m, m);
    const auto pairs = coulomb_pairs(system, frame);
    const int total = m * (m + 1) / 2;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (int idx = 0; idx < total; ++idx) {
        // Row-major lower triangle: idx = k(k+1)/2 + l with l <= k.
        const int k = static_cast<int>((std::sqrt(8.0 * idx + 1.0) - 1.0) / 2.0);
        const int l = idx - k * (k + 1) / 2;
        MatrixElementPair e = hamiltonian_element(basis[static_cast<std::size_t>(k)],
                                                  basis[static_cast<std::size_t>(l)],
                                                  frame.mass_matrix, pairs);
        mats.s(k, l) = mats.s(l, k) = e.s;
        mats.t(k, l) = mats.t(l, k) = e.t;
        mats.v(k, l) = mats.v(l, k) = e.v;
    }
    return mats;
}

SpectralSolution solve_gevp(const Eigen::MatrixXd& h, const Eigen::MatrixXd& s,
                            double drop_threshold) {
    if (h.rows() != s.rows() || h.rows() != h.cols() || s.rows() != s.cols())
        throw std::invalid_argument("solve_gevp: inconsistent matrix shapes");
    ReducedSpectrum red = reduce(s, h, -1, drop_threshold);
    SpectralSolution sol;
    sol.energies = red.eps;
    sol.coefficients = red.map;
    sol.retained_dimension = static_cast<int>(red.eps.size());
    sol.overlap_condition = red.overlap_condition;
    return sol;
}

void grow_basis(Wavefunction& state, RandomSource& rng, int trials, int target_size,
                const GrowthOptions& options) {
    if (trials < 1) throw std::invalid_argument("grow_basis: trials must be >= 1");
    if (target_size < state.basis_size())
        throw std::invalid_argument("grow_basis: target below current size");

    Engine eng(state.system, state.frame, target_size);
    if (state.basis_size() > 0) load_engine(eng, state);

    int candidate_counter = 0;
    for (const auto& step : state.history)
        candidate_counter = std::max(candidate_counter, step.accepted_candidate + 1);
    double e_cur = state.basis_size() > 0 ? state.energy
                                          : std::numeric_limits<double>::infinity();

    while (eng.m < target_size) {
        ReducedSpectrum red = reduce(eng.s.topLeftCorner(eng.m, eng.m), eng.h(), -1,
                                     options.drop_threshold);
        bool accepted = false;
        int trials_this_step = 0;

        for (int attempt = 0; attempt <= options.step_retries && !accepted; ++attempt) {
            const int first_candidate_id = candidate_counter;
            // Draw serially so the stream is independent of evaluation order.
            // Fresh pair-distance draws alternate with perturbed copies of
            // existing functions, which keeps late growth productive.
            std::vector<SymmetrizedEcg> cands;
            cands.reserve(static_cast<std::size_t>(trials));
            std::vector<Eigen::MatrixXd> gens;
            gens.reserve(static_cast<std::size_t>(trials));
            for (int c = 0; c < trials; ++c) {
                EcgPrimitive prim{{}, state.frame.reference_particle};
                if (c % 2 == 1 && eng.m > 0) {
                    const auto pick = static_cast<std::size_t>(rng.below(
                        static_cast<std::uint64_t>(eng.m)));
                    Eigen::VectorXd theta = matrix_to_param(state.generators[pick]);
                    for (int i = 0; i < theta.size(); ++i)
                        theta[i] += rng.uniform(-0.45, 0.45);
                    prim.a = param_to_matrix(theta, state.frame.n_coords());
                } else {
                    prim = random_primitive(rng, state.system, state.frame,
                                            options.scale_min, options.scale_max);
                }
                gens.push_back(prim.a);
                cands.push_back(symmetrize(prim, state.system, state.frame));
            }
            trials_this_step += trials;
            candidate_counter += trials;

            std::vector<double> energies(static_cast<std::size_t>(trials),
                                         std::numeric_limits<double>::infinity());
            std::vector<Eigen::VectorXd> s_rows(static_cast<std::size_t>(trials));
            std::vector<Eigen::VectorXd> t_rows(static_cast<std::size_t>(trials));
            std::vector<Eigen::VectorXd> v_rows(static_cast<std::size_t>(trials));
            for (int c = 0; c < trials; ++c) {
                const auto ci = static_cast<std::size_t>(c);
                eng.candidate_row(cands[ci], state.basis, eng.m, s_rows[ci], t_rows[ci],
                                  v_rows[ci]);
                const double s_dd = s_rows[ci][eng.m];
                if (!(s_dd > 0.0)) continue;
                bool dependent = false;
                for (int l = 0; l < eng.m && !dependent; ++l)
                    dependent = std::abs(s_rows[ci][l]) / std::sqrt(s_dd * eng.s(l, l)) >
                                options.max_pair_overlap;
                if (dependent) continue;
                auto e = bordered_ground(red, s_rows[ci].head(eng.m),
                                         t_rows[ci].head(eng.m) + v_rows[ci].head(eng.m),
                                         s_dd, t_rows[ci][eng.m] + v_rows[ci][eng.m]);
                if (e) energies[ci] = *e;
            }

            int best = -1;
            for (int c = 0; c < trials; ++c)
                if (energies[static_cast<std::size_t>(c)] <
                    (best < 0 ? e_cur : energies[static_cast<std::size_t>(best)]))
                    best = c;
            if (best < 0) continue;

            const auto bi = static_cast<std::size_t>(best);
            eng.write_row(eng.m, s_rows[bi], t_rows[bi], v_rows[bi]);
            eng.m += 1;
            state.generators.push_back(gens[bi]);
            state.basis.push_back(cands[bi]);

            // Polish the winner's parameters before locking the step in; the
            // reduced spectrum of the pre-existing functions is already here.
            if (auto sweep = parameter_sweep(eng, red, state.basis_without_last(), // placeholder
                                             state.system, state.frame,
                                             state.generators.back(), 0.5, 0.02)) {
                Eigen::VectorXd s_row, t_row, v_row;
                eng.candidate_row(sweep->func, state.basis, eng.m - 1, s_row, t_row, v_row);
            }

            SpectralSolution sol = eng.solve(options.drop_threshold);
            const double e_new = sol.energies[0];
            if (e_new > e_cur + 1e-12 * std::abs(e_cur)) {
                // The exact solve disagrees with the bordered estimate; drop it.
                eng.m -= 1;
                state.generators.pop_back();
                state.basis.pop_back();
                continue;
            }
            store_solution(state, eng, sol);
            e_cur = e_new;
            state.history.push_back(
                {eng.m, e_cur, first_candidate_id + best, trials_this_step});
            accepted = true;
        }

        if (!accepted) {
            if (options.log)
                (*options.log) << "warning: no acceptable candidate at size " << eng.m
                               << "; stopping growth\n";
            break;
        }
    }
}

Wavefunction grow_basis(const SystemDefinition& system, const CoordinateFrame& frame,
                        const GrowthOptions& options) {
    Wavefunction wf;
    wf.system = system;
    wf.frame = frame;
    wf.seed = options.seed;
    RandomSource rng(options.seed);
    grow_basis(wf, rng, options.trials, options.target_size, options);
    return wf;
}

void refine(Wavefunction& wf, const RefineOptions& options) {
    if (options.cycles < 1) return;
    if (wf.basis_size() == 0) throw std::invalid_argument("refine: empty wavefunction");

    Engine eng(wf.system, wf.frame, wf.basis_size());
    load_engine(eng, wf);
    constexpr double kTau = 1e-12;
    double e_cur = wf.energy;

    for (int cycle = 0; cycle < options.cycles; ++cycle) {
        for (int k = 0; k < eng.m; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            ReducedSpectrum red =
                reduce(eng.s.topLeftCorner(eng.m, eng.m), eng.h(), k, kTau);

            std::vector<SymmetrizedEcg> fixed;
            fixed.reserve(static_cast<std::size_t>(eng.m - 1));
            for (int l = 0; l < eng.m; ++l)
                if (l != k) fixed.push_back(wf.basis[static_cast<std::size_t>(l)]);

            auto sweep = parameter_sweep(eng, red, fixed, wf.system, wf.frame,
                                         wf.generators[ku], options.window,
                                         options.param_tol);
            if (!sweep) continue;

            Eigen::VectorXd s_row(eng.m), t_row(eng.m), v_row(eng.m);
            {
                Eigen::VectorXd sr, tr, vr;
                eng.candidate_row(sweep->func, fixed, eng.m - 1, sr, tr, vr);
                int pos = 0;
                for (int l = 0; l < eng.m; ++l) {
                    if (l == k) continue;
                    s_row[l] = sr[pos];
                    t_row[l] = tr[pos];
                    v_row[l] = vr[pos];
                    ++pos;
                }
                s_row[k] = sr[eng.m - 1];
                t_row[k] = tr[eng.m - 1];
                v_row[k] = vr[eng.m - 1];
            }
            Eigen::VectorXd old_s = eng.s.row(k).head(eng.m).transpose();
            Eigen::VectorXd old_t = eng.t.row(k).head(eng.m).transpose();
            Eigen::VectorXd old_v = eng.v.row(k).head(eng.m).transpose();
            eng.write_row(k, s_row, t_row, v_row);
            SpectralSolution sol = eng.solve(kTau);
            if (sol.energies[0] > e_cur - 1e-13 * std::abs(e_cur)) {
                eng.write_row(k, old_s, old_t, old_v);  // exact solve says no gain
                continue;
            }
            wf.generators[ku] = sweep->gen;
            wf.basis[ku] = sweep->func;
            store_solution(wf, eng, sol);
            e_cur = wf.energy;
        }

        if (options.scale_step) {
            // The basis family is closed under a uniform exponent rescaling,
            // so a stationary scale enforces the Coulomb virial balance.
            auto scaled_energy = [&](double log_s) {
                const double scale = std::exp(log_s);
                std::vector<SymmetrizedEcg> scaled = wf.basis;
                for (auto& f : scaled)
                    for (auto& term : f.terms) term.a *= scale;
                AssembledMatrices mats = assemble(scaled, wf.system, wf.frame);
                return solve_gevp(mats.h(), mats.s, kTau).energies[0];
            };
            double center = 0.0, best_log = 0.0, best_val = e_cur;
            for (int round = 0; round < 5; ++round) {
                double a = center - 0.4, b = center + 0.4;
                double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
                double f1 = scaled_energy(x1), f2 = scaled_energy(x2);
                while (b - a > 1e-3) {
                    if (f1 <= f2) {
                        b = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = b - kGolden * (b - a);
                        f1 = scaled_energy(x1);
                    } else {
                        a = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = a + kGolden * (b - a);
                        f2 = scaled_energy(x2);
                    }
                }
                best_log = f1 <= f2 ? x1 : x2;
                best_val = std::min(f1, f2);
                // Re-center until the optimum is interior to the bracket.
                if (std::abs(best_log - center) < 0.3) break;
                center = best_log;
            }
            if (best_val < e_cur - 1e-13 * std::abs(e_cur)) {
                const double scale = std::exp(best_log);
                for (auto& gen : wf.generators) gen *= scale;
                for (auto& f : wf.basis)
                    for (auto& term : f.terms) term.a *= scale;
                load_engine(eng, wf);
                SpectralSolution sol = eng.solve(kTau);
                if (sol.energies[0] < e_cur) {
                    store_solution(wf, eng, sol);
                    e_cur = wf.energy;
                } else {
                    const double inv = 1.0 / scale;
                    for (auto& gen : wf.generators) gen *= inv;
                    for (auto& f : wf.basis)
                        for (auto& term : f.terms) term.a *= inv;
                    load_engine(eng, wf);
                }
            }
        }

        wf.history.push_back({wf.basis_size(), wf.energy, -1, 0});
        if (options.log)
            (*options.log) << "refine cycle " << cycle + 1 << ": E = " << wf.energy << '\n';
    }
}

double rayleigh_quotient(const Wavefunction& wf, const AssembledMatrices& mats) {
    const Eigen::VectorXd& c = wf.coefficients;
    return c.dot(mats.h() * c) / c.dot(mats.s * c);
}

ConvergenceReport converge_report(const Wavefunction& wf) {
    if (wf.history.empty()) throw std::invalid_argument("converge_report: empty history");
    ConvergenceReport rep;
    rep.basis_size = wf.basis_size();
    rep.energy = wf.energy;

    const int half = wf.basis_size() / 2;
    double e_half = std::numeric_limits<double>::quiet_NaN();
    for (const auto& step : wf.history)
        if (step.basis_size <= half) e_half = step.energy;
    rep.delta_rel_doubling = std::isnan(e_half)
                                 ? std::numeric_limits<double>::infinity()
                                 : std::abs((wf.energy - e_half) / wf.energy);

    AssembledMatrices mats = assemble(wf.basis, wf.system, wf.frame);
    const Eigen::VectorXd& c = wf.coefficients;
    const double t_exp = c.dot(mats.t * c) / c.dot(mats.s * c);
    const double v_exp = c.dot(mats.v * c) / c.dot(mats.s * c);
    rep.virial_ratio = v_exp / t_exp;
    rep.overlap_condition = solve_gevp(mats.h(), mats.s).overlap_condition;
    rep.energy_converged = rep.delta_rel_doubling < 0.01;
    rep.virial_ok = rep.virial_ratio >= -2.02 && rep.virial_ratio <= -1.98;
    return rep;
}

}  // namespace molcoh
