#ifndef SBK_TEST_SUPPORT_HPP
#define SBK_TEST_SUPPORT_HPP

#include <cmath>

inline double rel_err(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

#endif
