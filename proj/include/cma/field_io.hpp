#pragma once

// Binary field dumps (magic "CMAF", version, grid geometry, row-major f64
// payload with the last real axis fastest) and a CSV export with one row per
// grid point. Both are byte-deterministic for identical inputs.

#include <string>

#include "cma/field.hpp"

namespace cma::grid {

inline constexpr std::uint32_t kFormatVersion = 1;

void dump_field(const ScalarField& f, const std::string& path);
ScalarField load_field(const std::string& path);
void export_csv(const ScalarField& f, const std::string& path);

}  // namespace cma::grid
