#pragma once

// Sweep serialization. CSV columns are fixed:
//   axis1,axis2,T,phi_u_rad,phi_u_quantized,omega1,status
// with 17 significant digits, '.' decimals and LF line endings. JSON carries
// a "metadata" header and a "cells" array with the same fields.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "u1d/sweep.hpp"

namespace u1d {

enum class OutputFormat { Csv, Json };

std::string version_string();

void write_csv(const std::vector<PhaseGridCell>& cells, std::ostream& out);
std::string to_csv(const std::vector<PhaseGridCell>& cells);

void write_json(const std::vector<PhaseGridCell>& cells, const SweepSpec& spec, std::ostream& out);
std::string to_json(const std::vector<PhaseGridCell>& cells, const SweepSpec& spec);

// Inverse of to_json for the "cells" array. Throws SchemaError.
std::vector<PhaseGridCell> cells_from_json(std::string_view text);

// Writes to a file; throws IoError if it cannot be opened or written.
void write_output(const std::vector<PhaseGridCell>& cells, const SweepSpec& spec,
                  OutputFormat format, const std::string& path);

Quantization parse_quantization(std::string_view token);
CellStatus parse_status(std::string_view token);

}  // namespace u1d
