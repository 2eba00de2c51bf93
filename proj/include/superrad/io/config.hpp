#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "superrad/model.hpp"

namespace superrad::io {

/// Physical dimension of a config value, used to select the accepted unit suffixes.
enum class Quantity { AngularFrequency, Rate, Time, Angle, Dimensionless };

/// Parses an expression such as "2pi*100MHz", "1e-4 ms", "pi/4" or "45deg" into
/// internal units (rad/µs, 1/µs, µs, rad). A bare number is taken as already
/// internal. Frequencies are angular: "MHz" means rad/µs and the 2π factor
/// must be written explicitly as "2pi*" or "two_pi*". Throws ConfigError.
double parse_quantity(std::string_view text, Quantity kind);

/// Reads the flat `key = value` format ('#' starts a comment). Overrides are
/// "key=value" strings applied after the file. Unknown, duplicate or missing
/// required keys raise ConfigError naming the key.
///
/// Keys: n_spins, omega0, omega_d, theta, tau_c (required); phi, geometry,
/// alpha_c; and either omega_sl, detuning, nbar (thermal bath) or p_plus,
/// p_minus (direct rates). Without bath keys the spin-lattice rates are zero.
model::SystemConfig parse_config(std::string_view text,
                                 const std::vector<std::string>& overrides = {},
                                 std::string_view source = "<config>");

model::SystemConfig load_config(const std::filesystem::path& path,
                                const std::vector<std::string>& overrides = {});

/// Sorted `key = value` lines of the resolved configuration in internal units,
/// values printed with 17 significant digits.
std::string canonical_form(const model::SystemConfig& cfg);

/// Hex SHA-256 of canonical_form(cfg).
std::string config_hash(const model::SystemConfig& cfg);

}  // namespace superrad::io
