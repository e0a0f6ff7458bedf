#pragma once
// Baseline probabilistic structures: Direct Bitmap and Count-min Sketch.
// The Direct Bitmap estimate is the raw popcount, not a log-corrected
// value; that is the quantity the BACON query sums per segment.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "inddos/crc32.hpp"

namespace inddos {

class DirectBitmap {
public:
    DirectBitmap(std::uint32_t m, const Crc32Spec& spec) : m_(m), hash_(spec), words_((m + 63) / 64, 0) {
        if (m < 2) throw std::invalid_argument("DirectBitmap: m must be >= 2");
    }

    void update(std::span<const std::uint8_t> key) {
        const std::uint32_t idx = hash_(key) % m_;
        words_[idx / 64] |= 1ull << (idx % 64);
    }

    // Raw count of set bits.
    std::uint32_t estimate() const {
        std::uint32_t c = 0;
        for (std::uint64_t w : words_) c += static_cast<std::uint32_t>(std::popcount(w));
        return c;
    }

    bool test(std::uint32_t idx) const { return (words_[idx / 64] >> (idx % 64)) & 1u; }
    std::uint32_t size() const { return m_; }

private:
    std::uint32_t m_;
    Crc32 hash_;
    std::vector<std::uint64_t> words_;
};

class CountMinSketch {
public:
    CountMinSketch(std::uint32_t d, std::uint32_t w, const std::vector<Crc32Spec>& specs)
        : d_(d), w_(w), counters_(static_cast<std::size_t>(d) * w, 0) {
        if (d < 1 || w < 1) throw std::invalid_argument("CountMinSketch: d and w must be >= 1");
        if (specs.size() != d) throw std::invalid_argument("CountMinSketch: need one spec per row");
        for (const auto& s : specs) hashes_.emplace_back(s);
    }

    void update(std::span<const std::uint8_t> key, std::uint64_t count = 1) {
        for (std::uint32_t i = 0; i < d_; ++i)
            counters_[static_cast<std::size_t>(i) * w_ + hashes_[i](key) % w_] += count;
    }

    std::uint64_t query(std::span<const std::uint8_t> key) const {
        std::uint64_t est = UINT64_MAX;
        for (std::uint32_t i = 0; i < d_; ++i)
            est = std::min(est, counters_[static_cast<std::size_t>(i) * w_ + hashes_[i](key) % w_]);
        return est;
    }

private:
    std::uint32_t d_, w_;
    std::vector<Crc32> hashes_;
    std::vector<std::uint64_t> counters_;
};

}  // namespace inddos
