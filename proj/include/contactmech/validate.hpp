#pragma once

#include <string>
#include <vector>

#include "contactmech/expr.hpp"

namespace contactmech {

/// Throws std::invalid_argument unless there are exactly `expected` names and
/// each is a distinct valid identifier.
void validateCoordinateNames(const std::vector<std::string>& coords, int expected);

/// Throws std::invalid_argument when a free variable of `e` is neither a
/// coordinate nor a parameter; the message names the unbound symbol.
void validateFreeVariables(const Expr& e, const std::vector<std::string>& coords,
                           const Bindings& params, const std::string& what);

}  // namespace contactmech
