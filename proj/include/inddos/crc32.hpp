#pragma once
// Parameterized CRC32 hash family.
//
// A small registry of CRC32 variants (crc32, crc32c, crc32d, crc32q,
// crc32mpeg) obtained by varying polynomial, bit reflection, initial value
// and final xor. Distinct parameterizations stand in for pairwise
// independent hash functions; the values are the ones exposed by Tofino's
// embedded CRC engine, including its init=0 convention for the reflected
// variants (which differs from the common init=0xFFFFFFFF one).

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace inddos {

struct Crc32Spec {
    std::string name;
    std::uint64_t poly = 0;  // 33-bit polynomial, leading bit set
    bool reflected = false;  // input and output bit reversal
    std::uint32_t init = 0;
    std::uint32_t xor_out = 0;
};

namespace detail {

constexpr std::uint32_t reflect32(std::uint32_t v) {
    v = ((v >> 1) & 0x55555555u) | ((v & 0x55555555u) << 1);
    v = ((v >> 2) & 0x33333333u) | ((v & 0x33333333u) << 2);
    v = ((v >> 4) & 0x0F0F0F0Fu) | ((v & 0x0F0F0F0Fu) << 4);
    v = ((v >> 8) & 0x00FF00FFu) | ((v & 0x00FF00FFu) << 8);
    return (v >> 16) | (v << 16);
}

}  // namespace detail

// Table-driven CRC32 engine for one spec. Construction precomputes the
// 256-entry table; evaluation is byte-at-a-time.
class Crc32 {
public:
    explicit Crc32(const Crc32Spec& spec) : spec_(spec) {
        if ((spec.poly & (1ull << 32)) == 0)
            throw std::invalid_argument("Crc32: poly must have bit 32 set: " + spec.name);
        const auto poly32 = static_cast<std::uint32_t>(spec.poly & 0xFFFFFFFFu);
        if (spec.reflected) {
            const std::uint32_t rpoly = detail::reflect32(poly32);
            for (std::uint32_t i = 0; i < 256; ++i) {
                std::uint32_t c = i;
                for (int k = 0; k < 8; ++k)
                    c = (c & 1u) ? (c >> 1) ^ rpoly : c >> 1;
                table_[i] = c;
            }
        } else {
            for (std::uint32_t i = 0; i < 256; ++i) {
                std::uint32_t c = i << 24;
                for (int k = 0; k < 8; ++k)
                    c = (c & 0x80000000u) ? (c << 1) ^ poly32 : c << 1;
                table_[i] = c;
            }
        }
    }

    std::uint32_t operator()(std::span<const std::uint8_t> data) const {
        if (spec_.reflected) {
            // reflected register holds reflect32 of the polynomial-division state
            std::uint32_t crc = detail::reflect32(spec_.init);
            for (std::uint8_t b : data)
                crc = (crc >> 8) ^ table_[(crc ^ b) & 0xFFu];
            return crc ^ spec_.xor_out;
        }
        std::uint32_t crc = spec_.init;
        for (std::uint8_t b : data)
            crc = (crc << 8) ^ table_[((crc >> 24) ^ b) & 0xFFu];
        return crc ^ spec_.xor_out;
    }

    const Crc32Spec& spec() const { return spec_; }

private:
    Crc32Spec spec_;
    std::array<std::uint32_t, 256> table_{};
};

inline const std::vector<Crc32Spec>& crc32_registry() {
    static const std::vector<Crc32Spec> registry = {
        {"crc32", 0x104C11DB7, true, 0x00000000u, 0xFFFFFFFFu},
        {"crc32c", 0x11EDC6F41, true, 0x00000000u, 0xFFFFFFFFu},
        {"crc32d", 0x1A833982B, true, 0x00000000u, 0xFFFFFFFFu},
        {"crc32q", 0x1814141AB, false, 0x00000000u, 0x00000000u},
        {"crc32mpeg", 0x104C11DB7, false, 0xFFFFFFFFu, 0x00000000u},
    };
    return registry;
}

inline const Crc32Spec& crc32_spec_by_name(std::string_view name) {
    for (const auto& s : crc32_registry())
        if (s.name == name) return s;
    throw std::invalid_argument("unknown CRC32 spec: " + std::string(name));
}

// h_bm plus d row hash functions.
struct HashFamily {
    Crc32Spec bitmap;
    std::vector<Crc32Spec> rows;
};

// Fixed deterministic assignment: crc32 serves as h_bm, the remaining
// registry entries (in listed order) as h_cm^1..h_cm^d. For d beyond the
// registry, extra rows reuse registry specs with a perturbed init value;
// distinctness on a probe set is checked by tests.
inline HashFamily hash_family(std::uint32_t d, bool allow_perturbed = false) {
    const auto& reg = crc32_registry();
    if (d < 1) throw std::invalid_argument("hash_family: d must be >= 1");
    HashFamily fam;
    fam.bitmap = reg[0];
    const std::size_t avail = reg.size() - 1;
    if (d > avail && !allow_perturbed)
        throw std::invalid_argument("hash_family: only " + std::to_string(avail) +
                                    " row specs available; enable perturbation for d=" +
                                    std::to_string(d));
    for (std::uint32_t i = 0; i < d; ++i) {
        Crc32Spec s = reg[1 + i % avail];
        if (i >= avail) {
            const std::uint32_t round = static_cast<std::uint32_t>(i / avail);
            s.init ^= 0x9E3779B9u * round;
            s.name += "+" + std::to_string(round);
        }
        fam.rows.push_back(std::move(s));
    }
    return fam;
}

}  // namespace inddos
