#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "itf/interval_map.hpp"

namespace itf {

// "p/q", decimal or integer; throws SchemaError(field)
double parse_number(std::string_view text, const std::string& field = "value");

// Keyed text document, one "key = value" per line, '#' starts a comment.
//   kind = tent | quadratic | chebyshev | plinear | custom
//   s / a / d             parameter of tent / quadratic / chebyshev
//   params = a=4, ...     same parameters in one line
//   breakpoints = 0, 2/3, 1
//   images = [0,1], [0,2/3]         (plinear)
//   orientations = +, -             (plinear, default alternating)
//   branches = 2*x ; 2-2*x          (custom, one expression per branch)
//   expr = 3.8*x*(1-x)              (custom, one expression on every branch)
//   crit = 1/2:2, 0.3:3:inflection  (point:order[:kind])
//   name = ...
IntervalMap parse_map_spec(std::string_view text);

// Built-in fixtures, "kind:param" shorthands (tent:1.8, quadratic:3.9,
// chebyshev:3) or a path to a map-spec file.
IntervalMap load_map(std::string_view name_or_path);
std::vector<std::string> builtin_map_names();

// parameter where f^3(1/2) equals the fixed point 1 - 1/a
double misiurewicz_parameter();

}  // namespace itf
