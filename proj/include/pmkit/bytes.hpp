#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pmkit {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Big-endian byte writer used by every serializer in the repo.
class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) {
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
        out_.push_back(static_cast<std::uint8_t>(v));
    }
    void u32(std::uint32_t v) {
        for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void u64(std::uint64_t v) {
        for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void fourcc(std::string_view tag) {
        if (tag.size() != 4) throw Error("fourcc must be 4 characters");
        out_.insert(out_.end(), tag.begin(), tag.end());
    }
    void bytes(ByteSpan b) { out_.insert(out_.end(), b.begin(), b.end()); }
    void text(std::string_view s) {
        out_.insert(out_.end(), s.begin(), s.end());
    }

    [[nodiscard]] std::size_t size() const { return out_.size(); }
    [[nodiscard]] Bytes take() { return std::move(out_); }
    [[nodiscard]] const Bytes& data() const { return out_; }

private:
    Bytes out_;
};

/// Bounds-checked big-endian reader. Throws the exception type supplied by
/// the caller so each parser reports its own error vocabulary.
class ByteReader {
public:
    explicit ByteReader(ByteSpan data) : data_(data) {}

    [[nodiscard]] std::size_t remaining() const { return data_.size() - pos_; }
    [[nodiscard]] std::size_t position() const { return pos_; }
    [[nodiscard]] bool done() const { return pos_ == data_.size(); }

    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t u16() {
        auto b = take(2);
        return static_cast<std::uint16_t>(b[0] << 8 | b[1]);
    }
    std::uint32_t u32() {
        auto b = take(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | b[i];
        return v;
    }
    std::uint64_t u64() {
        auto b = take(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | b[i];
        return v;
    }
    std::string fourcc() {
        auto b = take(4);
        return std::string(reinterpret_cast<const char*>(b.data()), 4);
    }
    ByteSpan bytes(std::size_t n) { return take(n); }

private:
    ByteSpan take(std::size_t n) {
        if (remaining() < n) throw Error("input truncated");
        ByteSpan out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    ByteSpan data_;
    std::size_t pos_ = 0;
};

std::string to_hex(ByteSpan data);
Bytes from_hex(std::string_view hex);

inline Bytes to_bytes(ByteSpan s) { return Bytes(s.begin(), s.end()); }
inline Bytes to_bytes(const Digest& d) { return Bytes(d.begin(), d.end()); }

inline std::string to_hex(const Digest& d) { return to_hex(ByteSpan(d.data(), d.size())); }

} // namespace pmkit
