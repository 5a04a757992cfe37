#pragma once

#include <optional>
#include <string>

#include "pmkit/bytes.hpp"

namespace pmkit::crypto {

struct CryptoError : Error {
    using Error::Error;
};

Digest sha256(ByteSpan data);

/// Ed25519 over raw 32-byte seeds. Key files are hex-encoded seeds; the
/// trust list stores raw public keys.
class SigningKey {
public:
    static SigningKey generate();
    static SigningKey from_seed(ByteSpan seed32);

    [[nodiscard]] const Bytes& seed() const { return seed_; }
    [[nodiscard]] const Bytes& public_key() const { return public_; }

    [[nodiscard]] Bytes sign(ByteSpan message) const;

private:
    SigningKey() = default;
    Bytes seed_;
    Bytes public_;
};

bool verify_signature(ByteSpan publicKey32, ByteSpan message, ByteSpan signature);

} // namespace pmkit::crypto
