#include "coevo/random.hpp"

#include <bit>

namespace coevo {

std::uint64_t double_bits(double v) noexcept {
    if (v == 0.0) v = 0.0;  // fold -0.0
    return std::bit_cast<std::uint64_t>(v);
}

}  // namespace coevo
