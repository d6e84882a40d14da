#pragma once

#include <string>

#include "molcoh/density.hpp"

namespace molcoh {

/// Writes "<base>.csv" (header theta_deg,rho_offdiag,rho_diag,ratio) and a
/// static "<base>.svg" plot of the ratio against the rotation angle with the
/// diagonal reference line at 1. Returns the two paths written.
struct ScanPaths {
    std::string csv;
    std::string svg;
};

ScanPaths emit_scan(const DensityScan& scan, const std::string& base_path,
                    const std::string& title = {});

std::string scan_to_csv(const DensityScan& scan);
std::string scan_to_svg(const DensityScan& scan, const std::string& title = {});

}  // namespace molcoh
