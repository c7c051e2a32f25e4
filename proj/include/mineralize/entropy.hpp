#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>

namespace mineralize {

// Shannon entropy of the byte histogram, in bits per byte [0, 8].
// 8 means total randomness; packed or encrypted payloads sit near it.
inline double shannon_entropy(std::span<const unsigned char> data) {
    if (data.empty()) throw std::invalid_argument("shannon_entropy: empty input");
    std::array<uint64_t, 256> histogram{};
    for (unsigned char c : data) ++histogram[c];
    double entropy = 0.0;
    double size = static_cast<double>(data.size());
    for (uint64_t count : histogram) {
        if (count == 0) continue;
        double p = static_cast<double>(count) / size;
        entropy -= p * std::log2(p);
    }
    return entropy;
}

inline double shannon_entropy(std::string_view bytes) {
    return shannon_entropy(std::span<const unsigned char>(
        reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()));
}

}  // namespace mineralize
