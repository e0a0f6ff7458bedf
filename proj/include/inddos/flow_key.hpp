#pragma once
// Flow key serialization. IPv4 addresses are hashed as 4 big-endian bytes;
// composite keys append the 16-bit port, also big-endian (on-wire order).
// An optional trailing 4-byte salt turns one fixed hash function into a
// family of per-trial draws without touching the hash implementation.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace inddos {

enum class KeyMode { Ip, IpPort };

// Fixed-capacity byte buffer for flow keys (4..13 bytes plus salt).
class FlowKey {
public:
    void push_u8(std::uint8_t v) { buf_[len_++] = v; }
    void push_u16_be(std::uint16_t v) {
        push_u8(static_cast<std::uint8_t>(v >> 8));
        push_u8(static_cast<std::uint8_t>(v));
    }
    void push_u32_be(std::uint32_t v) {
        push_u8(static_cast<std::uint8_t>(v >> 24));
        push_u8(static_cast<std::uint8_t>(v >> 16));
        push_u8(static_cast<std::uint8_t>(v >> 8));
        push_u8(static_cast<std::uint8_t>(v));
    }
    std::span<const std::uint8_t> bytes() const { return {buf_.data(), len_}; }
    std::size_t size() const { return len_; }

private:
    std::array<std::uint8_t, 20> buf_{};
    std::size_t len_ = 0;
};

inline FlowKey make_key(std::uint32_t ip, KeyMode mode, std::uint16_t port,
                        std::optional<std::uint32_t> salt = std::nullopt) {
    FlowKey k;
    k.push_u32_be(ip);
    if (mode == KeyMode::IpPort) k.push_u16_be(port);
    if (salt) k.push_u32_be(*salt);
    return k;
}

inline std::string ipv4_to_string(std::uint32_t ip) {
    return std::to_string(ip >> 24) + "." + std::to_string((ip >> 16) & 0xFF) + "." +
           std::to_string((ip >> 8) & 0xFF) + "." + std::to_string(ip & 0xFF);
}

inline std::optional<std::uint32_t> parse_ipv4(std::string_view s) {
    std::uint32_t ip = 0;
    int octets = 0;
    std::size_t i = 0;
    while (octets < 4) {
        if (i >= s.size() || s[i] < '0' || s[i] > '9') return std::nullopt;
        std::uint32_t v = 0;
        std::size_t digits = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            v = v * 10 + static_cast<std::uint32_t>(s[i] - '0');
            if (v > 255 || ++digits > 3) return std::nullopt;
            ++i;
        }
        ip = (ip << 8) | v;
        ++octets;
        if (octets < 4) {
            if (i >= s.size() || s[i] != '.') return std::nullopt;
            ++i;
        }
    }
    if (i != s.size()) return std::nullopt;
    return ip;
}

}  // namespace inddos
