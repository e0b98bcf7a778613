#include "ringlab/gray.hpp"

namespace ringlab {

std::vector<uint8_t> graycode_encode(uint32_t x, int m) {
  if (m <= 0 || m > 31) throw RangeError("graycode width out of range");
  if (x >= (1u << m)) throw RangeError("value does not fit graycode width");
  uint32_t g = x ^ (x >> 1);
  std::vector<uint8_t> bits(size_t(m), 0);
  for (int i = 0; i < m; ++i) bits[size_t(i)] = (g >> (m - 1 - i)) & 1u;
  return bits;
}

uint32_t graycode_decode(const std::vector<uint8_t>& bits) {
  uint32_t x = 0;
  uint8_t acc = 0;
  for (uint8_t b : bits) {
    acc ^= b;
    x = (x << 1) | acc;
  }
  return x;
}

int parity(const std::vector<uint8_t>& bits) {
  int p = 0;
  for (uint8_t b : bits) p ^= b;
  return p;
}

std::vector<uint8_t> composite_encode(uint32_t label, int guard, int label_bits) {
  if (label_bits <= 0 || label_bits > 30) throw RangeError("label width out of range");
  if (label >= (1u << label_bits)) throw RangeError("label does not fit width");
  std::vector<uint8_t> out;
  out.reserve(size_t(3 + 3 * label_bits));
  for (int c = 0; c < 3; ++c) out.push_back(uint8_t(guard & 1));
  for (int b = label_bits - 1; b >= 0; --b) {
    uint8_t bit = (label >> b) & 1u;
    for (int c = 0; c < 3; ++c) out.push_back(bit);
  }
  return out;
}

std::vector<uint8_t> majority_decode(const std::vector<uint8_t>& bits) {
  if (bits.size() % 3 != 0) throw ShapeError("bit count not divisible by 3");
  std::vector<uint8_t> out(bits.size() / 3);
  for (size_t i = 0; i < out.size(); ++i) {
    int sum = bits[3 * i] + bits[3 * i + 1] + bits[3 * i + 2];
    out[i] = sum >= 2 ? 1 : 0;
  }
  return out;
}

}  // namespace ringlab
