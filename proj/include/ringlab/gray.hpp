#pragma once

#include <cstdint>
#include <vector>

#include "ringlab/types.hpp"

namespace ringlab {

// Bit vectors are stored and rendered high-order bit first.

// Reflected binary Gray code: binary(x) XOR (binary(x) >> 1).
std::vector<uint8_t> graycode_encode(uint32_t x, int m);

// Inverse of graycode_encode for any bit width.
uint32_t graycode_decode(const std::vector<uint8_t>& bits);

// XOR of all bits.
int parity(const std::vector<uint8_t>& bits);

// Triple-redundant layout of a guarded label: the guard bit three times,
// then each of the label_bits label bits three times (high-order first).
std::vector<uint8_t> composite_encode(uint32_t label, int guard, int label_bits);

// Majority vote per consecutive triple; length must be divisible by 3.
std::vector<uint8_t> majority_decode(const std::vector<uint8_t>& bits);

}  // namespace ringlab
