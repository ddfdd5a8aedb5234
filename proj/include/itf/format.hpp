#pragma once

#include <string>

namespace itf {

// 9 significant digits; "inf", "-inf", "nan" for non-finite values
std::string fmt(double v);

}  // namespace itf

namespace itf {

// v rounded to 9 significant digits, for structured dumps
double round9(double v);

}  // namespace itf
