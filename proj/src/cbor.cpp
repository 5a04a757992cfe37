#include "pmkit/cbor.hpp"

#include <algorithm>

namespace pmkit::cbor {

namespace {

constexpr std::uint8_t kMajorUnsigned = 0;
constexpr std::uint8_t kMajorNegative = 1;
constexpr std::uint8_t kMajorBytes = 2;
constexpr std::uint8_t kMajorText = 3;
constexpr std::uint8_t kMajorArray = 4;
constexpr std::uint8_t kMajorMap = 5;
constexpr std::uint8_t kMajorSimple = 7;

void write_header(Bytes& out, std::uint8_t major, std::uint64_t value) {
    std::uint8_t m = static_cast<std::uint8_t>(major << 5);
    if (value < 24) {
        out.push_back(m | static_cast<std::uint8_t>(value));
    } else if (value <= 0xff) {
        out.push_back(m | 24);
        out.push_back(static_cast<std::uint8_t>(value));
    } else if (value <= 0xffff) {
        out.push_back(m | 25);
        for (int s = 8; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(value >> s));
    } else if (value <= 0xffffffff) {
        out.push_back(m | 26);
        for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(value >> s));
    } else {
        out.push_back(m | 27);
        for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(value >> s));
    }
}

void encode_into(Bytes& out, const Value& v) {
    if (v.is_null()) {
        out.push_back(0xf6);
    } else if (v.is_bool()) {
        out.push_back(v.as_bool() ? 0xf5 : 0xf4);
    } else if (v.is_uint()) {
        write_header(out, kMajorUnsigned, v.as_uint());
    } else if (v.is_nint()) {
        // negative n encodes as major 1 with argument -1 - n
        std::int64_t n = v.as_int();
        write_header(out, kMajorNegative, static_cast<std::uint64_t>(-1 - n));
    } else if (v.is_bytes()) {
        const Bytes& b = v.as_bytes();
        write_header(out, kMajorBytes, b.size());
        out.insert(out.end(), b.begin(), b.end());
    } else if (v.is_text()) {
        const std::string& s = v.as_text();
        write_header(out, kMajorText, s.size());
        out.insert(out.end(), s.begin(), s.end());
    } else if (v.is_array()) {
        const auto& a = v.as_array();
        write_header(out, kMajorArray, a.size());
        for (const Value& item : a) encode_into(out, item);
    } else {
        const auto& m = v.as_map();
        std::vector<std::pair<Bytes, Bytes>> encoded;
        encoded.reserve(m.size());
        for (const auto& [k, val] : m) {
            Bytes kb, vb;
            encode_into(kb, k);
            encode_into(vb, val);
            encoded.emplace_back(std::move(kb), std::move(vb));
        }
        std::sort(encoded.begin(), encoded.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 1; i < encoded.size(); ++i)
            if (encoded[i].first == encoded[i - 1].first) throw CborError("duplicate map key");
        write_header(out, kMajorMap, encoded.size());
        for (const auto& [kb, vb] : encoded) {
            out.insert(out.end(), kb.begin(), kb.end());
            out.insert(out.end(), vb.begin(), vb.end());
        }
    }
}

class Decoder {
public:
    explicit Decoder(ByteSpan data) : data_(data) {}

    Value decode_one() {
        std::uint8_t initial = take();
        std::uint8_t major = initial >> 5;
        std::uint8_t info = initial & 0x1f;

        if (major == kMajorSimple) {
            switch (info) {
                case 20: return Value(false);
                case 21: return Value(true);
                case 22: return Value(nullptr);
                default: throw CborError("unsupported simple value");
            }
        }

        std::uint64_t arg = read_argument(info);
        switch (major) {
            case kMajorUnsigned:
                return Value(arg);
            case kMajorNegative: {
                if (arg > static_cast<std::uint64_t>(INT64_MAX))
                    throw CborError("negative integer out of range");
                return Value(static_cast<std::int64_t>(-1 - static_cast<std::int64_t>(arg)));
            }
            case kMajorBytes: {
                ByteSpan b = take(arg);
                return Value(Bytes(b.begin(), b.end()));
            }
            case kMajorText: {
                ByteSpan b = take(arg);
                return Value(std::string(reinterpret_cast<const char*>(b.data()), b.size()));
            }
            case kMajorArray: {
                Value::Array items;
                items.reserve(arg < 4096 ? static_cast<std::size_t>(arg) : 4096);
                for (std::uint64_t i = 0; i < arg; ++i) items.push_back(decode_one());
                return Value(std::move(items));
            }
            case kMajorMap: {
                Value::Map entries;
                for (std::uint64_t i = 0; i < arg; ++i) {
                    Value k = decode_one();
                    Value val = decode_one();
                    entries.emplace_back(std::move(k), std::move(val));
                }
                return Value(std::move(entries));
            }
            default:
                throw CborError("unsupported major type");
        }
    }

    [[nodiscard]] bool done() const { return pos_ == data_.size(); }

private:
    std::uint64_t read_argument(std::uint8_t info) {
        if (info < 24) return info;
        std::uint64_t v = 0;
        int n;
        switch (info) {
            case 24: n = 1; break;
            case 25: n = 2; break;
            case 26: n = 4; break;
            case 27: n = 8; break;
            case 31: throw CborError("indefinite lengths not allowed");
            default: throw CborError("reserved additional info");
        }
        for (int i = 0; i < n; ++i) v = v << 8 | take();
        // minimal-length headers only, so re-encoding is byte identical
        std::uint64_t floor = n == 1 ? 24ull : 1ull << (4 * n);
        if (v < floor) throw CborError("non-minimal integer header");
        return v;
    }

    std::uint8_t take() {
        if (pos_ >= data_.size()) throw CborError("cbor input truncated");
        return data_[pos_++];
    }

    ByteSpan take(std::uint64_t n) {
        if (n > data_.size() - pos_) throw CborError("cbor input truncated");
        ByteSpan out = data_.subspan(pos_, static_cast<std::size_t>(n));
        pos_ += static_cast<std::size_t>(n);
        return out;
    }

    ByteSpan data_;
    std::size_t pos_ = 0;
};

} // namespace

const Value& Value::at(std::string_view key) const {
    if (const Value* v = find(key)) return *v;
    throw CborError("missing map key: " + std::string(key));
}

const Value* Value::find(std::string_view key) const {
    for (const auto& [k, v] : as_map())
        if (k.is_text() && k.as_text() == key) return &v;
    return nullptr;
}

bool Value::operator==(const Value& other) const {
    return encode(*this) == encode(other);
}

Bytes encode(const Value& value) {
    Bytes out;
    encode_into(out, value);
    return out;
}

Value decode(ByteSpan data) {
    Decoder d(data);
    Value v = d.decode_one();
    if (!d.done()) throw CborError("trailing bytes after cbor value");
    return v;
}

} // namespace pmkit::cbor
