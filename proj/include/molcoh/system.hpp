#pragma once

#include <string>
#include <vector>

namespace molcoh {

/// Point particle in electron-mass / elementary-charge atomic units.
struct Particle {
    double mass = 0.0;    // m_e units, > 0
    double charge = 0.0;  // e units
    std::string label;
};

/// A few-body system: particles plus the identical-particle pairs whose
/// spatial exchange symmetry is +1 (spin-singlet pairs). The target state is
/// always the N = 0, natural-parity ground state.
struct SystemDefinition {
    std::vector<Particle> particles;
    std::vector<std::vector<int>> identical_groups;

    int size() const { return static_cast<int>(particles.size()); }
    double total_mass() const;
    /// True if i and j belong to the same identical group.
    bool same_group(int i, int j) const;
};

/// Validates masses, charges and group consistency; throws std::invalid_argument.
SystemDefinition make_system(std::vector<Particle> particles,
                             std::vector<std::vector<int>> identical_groups);

/// Known presets: ps2, mu2, h2, d2, t2, hehp. For charge-scaled H2-like
/// systems use build_system_h2z.
SystemDefinition build_system(const std::string& preset, std::string* warning = nullptr);

/// H2 with both nuclear charges scaled to +z (masses stay at proton values).
/// z >= 2 produces an unbound system; a warning is emitted but the system is
/// still constructed.
SystemDefinition build_system_h2z(double z, std::string* warning = nullptr);

}  // namespace molcoh
