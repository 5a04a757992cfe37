#include "pmkit/crypto.hpp"

#include <memory>

#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

namespace pmkit {

std::string to_hex(ByteSpan data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) throw Error("hex string has odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]);
        int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw Error("invalid hex digit");
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

} // namespace pmkit

namespace pmkit::crypto {

namespace {

struct PkeyDeleter {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct CtxDeleter {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;

PkeyPtr private_key_from_seed(ByteSpan seed) {
    PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size()));
    if (!key) throw CryptoError("failed to load ed25519 private key");
    return key;
}

} // namespace

Digest sha256(ByteSpan data) {
    Digest out{};
    SHA256(data.data(), data.size(), out.data());
    return out;
}

SigningKey SigningKey::generate() {
    Bytes seed(32);
    if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1)
        throw CryptoError("RAND_bytes failed");
    return from_seed(seed);
}

SigningKey SigningKey::from_seed(ByteSpan seed32) {
    if (seed32.size() != 32) throw CryptoError("ed25519 seed must be 32 bytes");
    SigningKey k;
    k.seed_.assign(seed32.begin(), seed32.end());
    PkeyPtr key = private_key_from_seed(seed32);
    std::size_t len = 32;
    k.public_.resize(len);
    if (EVP_PKEY_get_raw_public_key(key.get(), k.public_.data(), &len) != 1 || len != 32)
        throw CryptoError("failed to derive ed25519 public key");
    return k;
}

Bytes SigningKey::sign(ByteSpan message) const {
    PkeyPtr key = private_key_from_seed(seed_);
    CtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx) throw CryptoError("EVP_MD_CTX_new failed");
    if (EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1)
        throw CryptoError("EVP_DigestSignInit failed");
    std::size_t sigLen = 64;
    Bytes sig(sigLen);
    if (EVP_DigestSign(ctx.get(), sig.data(), &sigLen, message.data(), message.size()) != 1)
        throw CryptoError("EVP_DigestSign failed");
    sig.resize(sigLen);
    return sig;
}

bool verify_signature(ByteSpan publicKey32, ByteSpan message, ByteSpan signature) {
    if (publicKey32.size() != 32 || signature.size() != 64) return false;
    PkeyPtr key(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, publicKey32.data(), publicKey32.size()));
    if (!key) return false;
    CtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx) return false;
    if (EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1) return false;
    return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(), message.size()) == 1;
}

} // namespace pmkit::crypto
