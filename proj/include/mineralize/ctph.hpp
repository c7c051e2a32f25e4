#pragma once

// Context-triggered piecewise hashing (Kornblum's construction) and the
// edit-distance similarity score over signatures.
//
// A window-7 rolling hash decides piece boundaries; each piece is
// condensed to one base64 character of its FNV hash. Signatures are
// emitted at a block size chosen so that a typical input yields about 64
// pieces, together with a second signature at double that block size for
// cross-size comparison. Distances are 1 - similarity/100, so the 0.1
// stock-miner threshold corresponds to a match score above 90.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mineralize/common.hpp"

namespace mineralize {

inline constexpr std::size_t kCtphSignatureLength = 64;
inline constexpr std::size_t kCtphMinBlockSize = 3;
inline constexpr std::size_t kCtphRollingWindow = 7;

struct FuzzyDigest {
    uint64_t block_size = kCtphMinBlockSize;
    std::string sig1;  // at block_size
    std::string sig2;  // at 2 * block_size

    friend bool operator==(const FuzzyDigest&, const FuzzyDigest&) = default;

    // "block_size:sig1:sig2"
    std::string str() const {
        return std::to_string(block_size) + ":" + sig1 + ":" + sig2;
    }

    static std::optional<FuzzyDigest> parse(std::string_view s) {
        auto first = s.find(':');
        if (first == std::string_view::npos) return std::nullopt;
        auto second = s.find(':', first + 1);
        if (second == std::string_view::npos) return std::nullopt;
        auto bs = parse_int(s.substr(0, first));
        if (!bs || *bs < static_cast<int64_t>(kCtphMinBlockSize)) return std::nullopt;
        FuzzyDigest d;
        d.block_size = static_cast<uint64_t>(*bs);
        d.sig1 = std::string(s.substr(first + 1, second - first - 1));
        d.sig2 = std::string(s.substr(second + 1));
        if (d.sig1.size() > kCtphSignatureLength || d.sig2.size() > kCtphSignatureLength)
            return std::nullopt;
        return d;
    }
};

namespace ctph_detail {

inline constexpr char kBase64[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
inline constexpr uint32_t kFnvPrime = 0x01000193;
inline constexpr uint32_t kFnvInit = 0x28021967;

class RollingHash {
public:
    uint32_t push(unsigned char c) {
        h2_ -= h1_;
        h2_ += static_cast<uint32_t>(kCtphRollingWindow) * c;
        h1_ += c;
        h1_ -= window_[pos_];
        window_[pos_] = c;
        pos_ = (pos_ + 1) % kCtphRollingWindow;
        h3_ <<= 5;
        h3_ ^= c;
        return h1_ + h2_ + h3_;
    }

private:
    std::array<uint32_t, kCtphRollingWindow> window_{};
    uint32_t h1_ = 0, h2_ = 0, h3_ = 0;
    std::size_t pos_ = 0;
};

inline uint32_t fnv_step(uint32_t h, unsigned char c) { return (h * kFnvPrime) ^ c; }

// One pass at a fixed block size; produces the signature pair.
inline void digest_pass(std::span<const unsigned char> data, uint64_t block_size,
                        std::string& sig1, std::string& sig2) {
    sig1.clear();
    sig2.clear();
    RollingHash roll;
    uint32_t piece1 = kFnvInit, piece2 = kFnvInit;
    for (unsigned char c : data) {
        uint32_t rh = roll.push(c);
        piece1 = fnv_step(piece1, c);
        piece2 = fnv_step(piece2, c);
        if (rh % block_size == block_size - 1) {
            if (sig1.size() < kCtphSignatureLength - 1) {
                sig1.push_back(kBase64[piece1 % 64]);
                piece1 = kFnvInit;
            }
        }
        if (rh % (block_size * 2) == block_size * 2 - 1) {
            if (sig2.size() < kCtphSignatureLength / 2 - 1) {
                sig2.push_back(kBase64[piece2 % 64]);
                piece2 = kFnvInit;
            }
        }
    }
    // Close the trailing piece so short tails still contribute.
    sig1.push_back(kBase64[piece1 % 64]);
    sig2.push_back(kBase64[piece2 % 64]);
}

// Sequences longer than three identical characters carry little
// information but skew the edit distance; collapse them before scoring.
inline std::string collapse_runs(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        std::size_t n = out.size();
        if (n >= 3 && out[n - 1] == c && out[n - 2] == c && out[n - 3] == c) continue;
        out.push_back(c);
    }
    return out;
}

inline bool has_common_substring(std::string_view a, std::string_view b, std::size_t len) {
    if (a.size() < len || b.size() < len) return false;
    for (std::size_t i = 0; i + len <= a.size(); ++i) {
        if (b.find(a.substr(i, len)) != std::string_view::npos) return true;
    }
    return false;
}

// Weighted edit distance: insert/delete cost 1, substitute cost 2.
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 2);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

// Match score in [0, 100] for two signatures taken at the same block
// size. Zero unless they share a 7-character substring; capped for
// small block sizes where a high score would be unearned.
inline uint32_t score_strings(std::string_view s1, std::string_view s2, uint64_t block_size) {
    if (!has_common_substring(s1, s2, kCtphRollingWindow)) return 0;
    std::size_t e = edit_distance(s1, s2);
    uint64_t score = e * kCtphSignatureLength / (s1.size() + s2.size());
    score = score * 100 / kCtphSignatureLength;
    if (score > 100) score = 100;
    uint64_t result = 100 - score;
    uint64_t cap = block_size / kCtphMinBlockSize * std::min(s1.size(), s2.size());
    if (result > cap) result = cap;
    return static_cast<uint32_t>(result);
}

}  // namespace ctph_detail

// Deterministic fuzzy digest of a byte sequence. Empty input is a
// contract violation.
inline FuzzyDigest ctph_digest(std::span<const unsigned char> data) {
    if (data.empty()) throw std::invalid_argument("ctph_digest: empty input");

    uint64_t block_size = kCtphMinBlockSize;
    while (block_size * kCtphSignatureLength < data.size()) block_size *= 2;

    FuzzyDigest d;
    for (;;) {
        d.block_size = block_size;
        ctph_detail::digest_pass(data, block_size, d.sig1, d.sig2);
        if (block_size > kCtphMinBlockSize && d.sig1.size() < kCtphSignatureLength / 2)
            block_size /= 2;
        else
            break;
    }
    return d;
}

inline FuzzyDigest ctph_digest(std::string_view bytes) {
    return ctph_digest(std::span<const unsigned char>(
        reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()));
}

// Similarity score in [0, 100]; 0 when block sizes are incomparable.
inline uint32_t ctph_similarity(const FuzzyDigest& a, const FuzzyDigest& b) {
    using namespace ctph_detail;
    if (a.block_size != b.block_size && a.block_size != b.block_size * 2 &&
        b.block_size != a.block_size * 2)
        return 0;
    std::string a1 = collapse_runs(a.sig1), a2 = collapse_runs(a.sig2);
    std::string b1 = collapse_runs(b.sig1), b2 = collapse_runs(b.sig2);
    if (a.block_size == b.block_size) {
        if (a.sig1 == b.sig1) return 100;
        return std::max(score_strings(a1, b1, a.block_size),
                        score_strings(a2, b2, a.block_size * 2));
    }
    if (a.block_size == b.block_size * 2) return score_strings(a1, b2, a.block_size);
    return score_strings(a2, b1, b.block_size);
}

// Distance in [0, 1]; symmetric; 0 for identical inputs, 1 for
// incomparable block sizes.
inline double ctph_distance(const FuzzyDigest& a, const FuzzyDigest& b) {
    return 1.0 - static_cast<double>(ctph_similarity(a, b)) / 100.0;
}

}  // namespace mineralize
