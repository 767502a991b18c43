#pragma once

#include <string>

#include "dispersal/models/builders.h"

namespace dispersal::prism {

/// PRISM source for a program: `mdp` header, one `const int` per named parameter, one module per
/// component and a label per proposition. Probabilities are written as exact fractions.
std::string export_prism(const models::ModelProgram& program);

std::string export_prism(const models::ModelParams& params, models::Attacker attacker,
                         models::ClientKind client = models::ClientKind::Full);

}  // namespace dispersal::prism
