#pragma once

#include <string>

namespace rigidloc {

/// 17 significant digits, so the text round-trips to the same double.
/// Non-finite values print as "inf", "-inf" or "nan".
std::string format_real(double value);

}  // namespace rigidloc
