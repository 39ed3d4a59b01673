#pragma once

// Expression language for group-ring elements:
//
//   -[1 2; 0 7] + [7 0; -52 1]      matrix literals, sums, rational scalars
//   (1 - [3 1; -13 -4]) * (1 - eps*$E)   products, variables, eps and a_n
//   H [3 -1; 13 -4] beta(2/3)       juxtaposition multiplies
//   T(3) - a_3, T, W, M2, I, diag(2,1), inv(x), x^-1
//
// Names that depend on the level (H, W, M2, T(n), surd entries) use
// `level`.

#include <map>
#include <string>
#include <string_view>

#include "hw/group_ring.hpp"

namespace hw {

struct ExprContext {
    long level = 0;
    int weight = 2;
    std::map<std::string, Element> vars;
};

Element parse_element(std::string_view text, const ExprContext& ctx);

// The expression must evaluate to a single matrix with coefficient 1.
ProjMatrix parse_matrix_expr(std::string_view text, const ExprContext& ctx);

} // namespace hw
