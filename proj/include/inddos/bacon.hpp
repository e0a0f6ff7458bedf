#pragma once
// BACON sketch: a d x w Count-min grid whose cells are m-bit Direct Bitmap
// segments. key_src selects the bit (bucket), key_dst selects the segment
// per row; the query is the minimum per-row segment popcount. An auxiliary
// d x w counter grid materializes every segment's popcount so a query costs
// d counter reads instead of a bit scan.
//
// Two execution modes share the same observable behavior:
//  * plain: flat index seg*m + bucket with true modulo, any sizes.
//  * hardware: power-of-two sizes only, index formed by bit concatenation
//    (seg << log2(m) | bucket), rows split across registers of at most
//    2^17 bits, the index's high bits selecting the register label.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <vector>

#include "inddos/crc32.hpp"

namespace inddos {

inline constexpr std::uint32_t kMaxRegisterBits = 1u << 17;

struct SketchParams {
    std::uint32_t d = 3;
    std::uint32_t w = 1024;
    std::uint32_t m = 1024;
    bool hardware_mode = false;

    void validate() const {
        if (d < 1 || w < 1 || m < 2)
            throw std::invalid_argument("SketchParams: require d >= 1, w >= 1, m >= 2");
        if (hardware_mode && (!std::has_single_bit(w) || !std::has_single_bit(m)))
            throw std::invalid_argument("SketchParams: hardware mode requires power-of-two w and m");
    }
};

struct RegisterIndex {
    std::uint32_t label;
    std::uint32_t offset;
};

// Bit-concatenation addressing: full = (seg << log2(m)) | bucket, split at
// the 2^17-bit register cap. Identity: label * 2^17 + offset == seg*m + bucket.
inline RegisterIndex concat_index(std::uint32_t bucket, std::uint32_t seg, const SketchParams& p) {
    if (!std::has_single_bit(p.w) || !std::has_single_bit(p.m))
        throw std::invalid_argument("concat_index: w and m must be powers of two");
    const std::uint32_t log_m = static_cast<std::uint32_t>(std::countr_zero(p.m));
    const std::uint32_t full = (seg << log_m) | bucket;
    const std::uint32_t log_w = static_cast<std::uint32_t>(std::countr_zero(p.w));
    if (log_m + log_w <= 17) return {0, full};
    return {full >> 17, full & (kMaxRegisterBits - 1)};
}

struct UpdateOutcome {
    std::uint32_t flipped_rows = 0;  // bit i set iff row i flipped 0 -> 1
    std::uint32_t estimate = 0;      // fresh min-of-aux for key_dst after this update
    bool any_flip() const { return flipped_rows != 0; }
};

class BaconSketch {
public:
    BaconSketch(const SketchParams& params, const HashFamily& family)
        : params_(params), bitmap_hash_(family.bitmap) {
        params_.validate();
        if (family.rows.size() != params_.d)
            throw std::invalid_argument("BaconSketch: hash family must provide d row specs");
        for (const auto& s : family.rows) row_hashes_.emplace_back(s);
        const std::uint64_t row_bits = static_cast<std::uint64_t>(params_.w) * params_.m;
        std::uint32_t regs = 1;
        std::uint64_t reg_bits = row_bits;
        if (params_.hardware_mode && row_bits > kMaxRegisterBits) {
            regs = static_cast<std::uint32_t>(row_bits / kMaxRegisterBits);
            reg_bits = kMaxRegisterBits;
        }
        words_per_reg_ = static_cast<std::size_t>((reg_bits + 63) / 64);
        rows_.assign(params_.d, std::vector<std::vector<std::uint64_t>>(
                                    regs, std::vector<std::uint64_t>(words_per_reg_, 0)));
        aux_.assign(params_.d, std::vector<std::uint32_t>(params_.w, 0));
    }

    explicit BaconSketch(const SketchParams& params) : BaconSketch(params, hash_family(params.d, true)) {}

    UpdateOutcome update(std::span<const std::uint8_t> key_src, std::span<const std::uint8_t> key_dst) {
        const std::uint32_t bucket = bitmap_hash_(key_src) % params_.m;
        UpdateOutcome out;
        out.estimate = UINT32_MAX;
        for (std::uint32_t i = 0; i < params_.d; ++i) {
            const std::uint32_t seg = row_hashes_[i](key_dst) % params_.w;
            RegisterIndex ri;
            if (params_.hardware_mode) {
                ri = concat_index(bucket, seg, params_);
            } else {
                const std::uint64_t flat = static_cast<std::uint64_t>(seg) * params_.m + bucket;
                ri = {static_cast<std::uint32_t>(flat / (words_per_reg_ * 64)),
                      static_cast<std::uint32_t>(flat % (words_per_reg_ * 64))};
            }
            std::uint64_t& word = rows_[i][ri.label][ri.offset / 64];
            const std::uint64_t mask = 1ull << (ri.offset % 64);
            if ((word & mask) == 0) {
                word |= mask;
                out.flipped_rows |= 1u << i;
                ++aux_[i][seg];
            }
            out.estimate = std::min(out.estimate, aux_[i][seg]);
        }
        return out;
    }

    std::uint32_t query(std::span<const std::uint8_t> key_dst) const {
        std::uint32_t est = UINT32_MAX;
        for (std::uint32_t i = 0; i < params_.d; ++i)
            est = std::min(est, aux_[i][row_hashes_[i](key_dst) % params_.w]);
        return est;
    }

    void reset() {
        for (auto& row : rows_)
            for (auto& reg : row) std::fill(reg.begin(), reg.end(), 0);
        for (auto& row : aux_) std::fill(row.begin(), row.end(), 0);
    }

    const SketchParams& params() const { return params_; }

    std::uint32_t aux(std::uint32_t row, std::uint32_t seg) const { return aux_[row][seg]; }

    std::uint32_t row_segment(std::uint32_t row, std::span<const std::uint8_t> key_dst) const {
        return row_hashes_[row](key_dst) % params_.w;
    }

    std::uint32_t bitmap_bucket(std::span<const std::uint8_t> key_src) const {
        return bitmap_hash_(key_src) % params_.m;
    }

    // Bit at flat position seg*m + bucket of a row, mode-independent.
    bool row_bit(std::uint32_t row, std::uint64_t flat) const {
        const std::uint64_t reg_bits = static_cast<std::uint64_t>(words_per_reg_) * 64;
        const auto& reg = rows_[row][static_cast<std::size_t>(flat / reg_bits)];
        const std::uint64_t off = flat % reg_bits;
        return (reg[off / 64] >> (off % 64)) & 1u;
    }

    // Flat binary dump: row-major bit planes (registers concatenated in label
    // order), then the aux grid as little-endian 32-bit counters.
    std::vector<std::uint8_t> serialize() const {
        std::vector<std::uint8_t> out;
        for (const auto& row : rows_)
            for (const auto& reg : row)
                for (std::uint64_t w : reg)
                    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(w >> (8 * b)));
        for (const auto& row : aux_)
            for (std::uint32_t c : row)
                for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(c >> (8 * b)));
        return out;
    }

private:
    SketchParams params_;
    Crc32 bitmap_hash_;
    std::vector<Crc32> row_hashes_;
    std::size_t words_per_reg_;
    std::vector<std::vector<std::vector<std::uint64_t>>> rows_;  // [row][label][word]
    std::vector<std::vector<std::uint32_t>> aux_;                // [row][seg]
};

}  // namespace inddos
