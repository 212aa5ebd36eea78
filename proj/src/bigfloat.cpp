#include "ergopt/bigfloat.hpp"

#include <cstdio>
#include <vector>

namespace ergopt {

std::string BigFloat::to_string(int digits) const {
    if (mpfr_zero_p(x_)) return "0";
    // %.{digits-1}Re prints one digit before the point plus digits-1 after.
    char fmt[32];
    std::snprintf(fmt, sizeof(fmt), "%%.%dRe", digits - 1);
    int need = mpfr_snprintf(nullptr, 0, fmt, x_);
    std::vector<char> buf(static_cast<size_t>(need) + 1);
    mpfr_snprintf(buf.data(), buf.size(), fmt, x_);
    return std::string(buf.data());
}

} // namespace ergopt
