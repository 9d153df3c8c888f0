#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lifshitz/config.hpp"
#include "lifshitz/potentials.hpp"
#include "lifshitz/randomness.hpp"

namespace lifshitz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNonConvergence = 2;

// Entry point of the `lifshitz` executable. Subcommands: ids, fit, bounds,
// certify, check-hyp, ld. Every run writes <subcommand>-<hash>.* files into
// --out-dir, never replacing an existing file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Config → domain objects; throw ValidationError naming the offending field.
void validate_keys(const Config& cfg);
CouplingDistribution distribution_from_config(const Config& cfg);
SingleSiteModel model_from_config(const Config& cfg, const CouplingDistribution* dist = nullptr);
std::vector<double> grid_from_config(const Config& cfg);

}  // namespace lifshitz::cli
