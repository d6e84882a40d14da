#include "molcoh/system.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace molcoh {

namespace {

// Masses in m_e. The alpha mass is the CODATA 2018 value; the others follow
// the usual few-body literature conventions for these systems.
constexpr double kMassProton = 1836.15;
constexpr double kMassDeuteron = 3670.48;
constexpr double kMassTriton = 5496.92;
constexpr double kMassMuon = 206.768;
constexpr double kMassAlpha = 7294.29954142;

SystemDefinition homonuclear_pair(double nuclear_mass, double nuclear_charge,
                                  const std::string& nucleus_label) {
    std::vector<Particle> p = {
        {nuclear_mass, nuclear_charge, nucleus_label + "1"},
        {nuclear_mass, nuclear_charge, nucleus_label + "2"},
        {1.0, -1.0, "e1"},
        {1.0, -1.0, "e2"},
    };
    return make_system(std::move(p), {{0, 1}, {2, 3}});
}

}  // namespace

double SystemDefinition::total_mass() const {
    double m = 0.0;
    for (const auto& p : particles) m += p.mass;
    return m;
}

bool SystemDefinition::same_group(int i, int j) const {
    for (const auto& g : identical_groups) {
        bool has_i = false, has_j = false;
        for (int k : g) {
            has_i = has_i || k == i;
            has_j = has_j || k == j;
        }
        if (has_i || has_j) return has_i && has_j;
    }
    return false;
}

SystemDefinition make_system(std::vector<Particle> particles,
                             std::vector<std::vector<int>> identical_groups) {
    if (particles.size() < 2) throw std::invalid_argument("system needs at least 2 particles");
    for (const auto& p : particles) {
        if (!(p.mass > 0.0) || !std::isfinite(p.mass))
            throw std::invalid_argument("particle mass must be positive and finite");
        if (!std::isfinite(p.charge)) throw std::invalid_argument("particle charge must be finite");
    }
    std::set<int> seen;
    const int n = static_cast<int>(particles.size());
    for (const auto& g : identical_groups) {
        if (g.size() < 2) throw std::invalid_argument("identical group needs at least 2 members");
        for (int i : g) {
            if (i < 0 || i >= n) throw std::invalid_argument("identical group index out of range");
            if (!seen.insert(i).second)
                throw std::invalid_argument("identical groups must be disjoint");
            if (particles[static_cast<std::size_t>(i)].mass != particles[static_cast<std::size_t>(g[0])].mass ||
                particles[static_cast<std::size_t>(i)].charge != particles[static_cast<std::size_t>(g[0])].charge)
                throw std::invalid_argument("identical group mixes unequal particles");
        }
    }
    SystemDefinition sys;
    sys.particles = std::move(particles);
    sys.identical_groups = std::move(identical_groups);
    return sys;
}

SystemDefinition build_system(const std::string& preset, std::string* warning) {
    if (warning) warning->clear();
    if (preset == "ps2") return homonuclear_pair(1.0, 1.0, "p+");
    if (preset == "mu2") return homonuclear_pair(kMassMuon, 1.0, "mu");
    if (preset == "h2") return homonuclear_pair(kMassProton, 1.0, "p");
    if (preset == "d2") return homonuclear_pair(kMassDeuteron, 1.0, "d");
    if (preset == "t2") return homonuclear_pair(kMassTriton, 1.0, "t");
    if (preset == "hehp") {
        std::vector<Particle> p = {
            {kMassAlpha, 2.0, "alpha"},
            {kMassProton, 1.0, "p"},
            {1.0, -1.0, "e1"},
            {1.0, -1.0, "e2"},
        };
        return make_system(std::move(p), {{2, 3}});
    }
    throw std::invalid_argument("unknown preset '" + preset + "'");
}

SystemDefinition build_system_h2z(double z, std::string* warning) {
    if (warning) warning->clear();
    if (!(z > 0.0) || !std::isfinite(z)) throw std::invalid_argument("h2z charge must be positive");
    if (z >= 2.0 && warning)
        *warning = "h2z with Z >= 2 is unbound; constructing the system anyway";
    return homonuclear_pair(kMassProton, z, "n");
}

}  // namespace molcoh
