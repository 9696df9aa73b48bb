#pragma once

// JSON model descriptions and command-line list parsing.
//
// Measures:     {"type":"homogeneous","c1":2,"c2":1}
//               {"type":"lebesgue"}
//               {"type":"quasi","nu":-0.3,"rho_plus":1,"rho_minus":1}
//               {"type":"table","x":[...],"rho":[...],"tail_plus":1,"tail_minus":1}
// Hamiltonians: {"type":"identity"}
//               {"type":"diagonal_power","m":0.5}
//               {"type":"homogeneous_isp","C1":0.549,"C":0,"C2":0.35}
//               {"type":"table","t":[...],"h11":[...],"h12":[...],"h22":[...]}

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "canon/measure.hpp"
#include "canon/system.hpp"

namespace canon::io {

using json = nlohmann::json;

/// Throws InvalidModel on unknown types or missing fields.
measure::SpectralMeasure parse_measure(const json& j);
system::HamiltonianSpec parse_hamiltonian(const json& j);

/// The argument is inline JSON when it starts with '{', a file path otherwise.
json load_json_argument(const std::string& arg);

measure::SpectralMeasure load_measure(const std::string& arg);
system::HamiltonianSpec load_hamiltonian(const std::string& arg);

/// "a,b,c" -> {a, b, c}.
std::vector<double> parse_list(const std::string& text);

/// "a:b:n" -> n equally spaced points from a to b inclusive; otherwise a list.
std::vector<double> parse_grid(const std::string& text);

/// Shortest round-trip-safe decimal ("%.17g").
std::string format_double(double x);

}  // namespace canon::io
