#pragma once

#include <string>

#include "molcoh/solver.hpp"

namespace molcoh {

/// Versioned text format "ECGWF 1". Doubles are printed with 17 significant
/// digits, so save -> load -> save is byte-identical. Loading re-verifies the
/// Rayleigh-quotient invariant against the reassembled matrices and checks a
/// trailing content checksum (mismatch is a warning, not an error).
void save_wavefunction(const Wavefunction& wf, const std::string& path);
Wavefunction load_wavefunction(const std::string& path, std::string* warning = nullptr);

std::string wavefunction_to_text(const Wavefunction& wf);
Wavefunction wavefunction_from_text(const std::string& text, std::string* warning = nullptr);

}  // namespace molcoh
