// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "lightchain/encoding.hpp"
#include "lightchain/identifier.hpp"

namespace lightchain {

// The protocol treats signatures as an ideal primitive. Two schemes live
// behind one contract: a deterministic HMAC-SHA-256 stand-in that keeps
// simulation runs fast, and Ed25519 for protocol-mode tests.
enum class SchemeKind : std::uint8_t { hmac_sha256, ed25519 };

struct KeyPair {
    SchemeKind kind = SchemeKind::hmac_sha256;
    Bytes signing_key;
    Bytes verify_key;
};

struct Signature {
    Bytes bytes;
    Identifier signer_id;
};

inline KeyPair make_hmac_keypair(BytesView secret) {
    KeyPair kp;
    kp.kind = SchemeKind::hmac_sha256;
    kp.signing_key.assign(secret.begin(), secret.end());
    // The MAC stand-in has no asymmetry; the simulator's trust model lets the
    // verify side hold the same secret.
    kp.verify_key = kp.signing_key;
    return kp;
}

inline KeyPair make_ed25519_keypair(BytesView seed32) {
    if (seed32.size() != 32) throw InvalidParameter("ed25519 seed must be 32 bytes");
    EVP_PKEY* pkey = EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                                  seed32.data(), seed32.size());
    if (!pkey) throw std::runtime_error("ed25519 key generation failed");
    KeyPair kp;
    kp.kind = SchemeKind::ed25519;
    kp.signing_key.assign(seed32.begin(), seed32.end());
    std::size_t publen = 32;
    kp.verify_key.resize(publen);
    EVP_PKEY_get_raw_public_key(pkey, kp.verify_key.data(), &publen);
    EVP_PKEY_free(pkey);
    return kp;
}

inline Bytes sign_raw(const KeyPair& kp, BytesView message) {
    if (kp.kind == SchemeKind::hmac_sha256) {
        Bytes mac(32);
        unsigned len = 32;
        HMAC(EVP_sha256(), kp.signing_key.data(), static_cast<int>(kp.signing_key.size()),
             message.data(), message.size(), mac.data(), &len);
        return mac;
    }
    EVP_PKEY* pkey = EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                                  kp.signing_key.data(), kp.signing_key.size());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    Bytes sig(64);
    std::size_t siglen = 64;
    EVP_DigestSignInit(ctx, nullptr, nullptr, nullptr, pkey);
    EVP_DigestSign(ctx, sig.data(), &siglen, message.data(), message.size());
    EVP_MD_CTX_free(ctx);
    EVP_PKEY_free(pkey);
    sig.resize(siglen);
    return sig;
}

inline bool verify_raw(SchemeKind kind, BytesView verify_key, BytesView message,
                       BytesView sig) {
    if (kind == SchemeKind::hmac_sha256) {
        if (sig.size() != 32) return false;
        Bytes mac(32);
        unsigned len = 32;
        HMAC(EVP_sha256(), verify_key.data(), static_cast<int>(verify_key.size()),
             message.data(), message.size(), mac.data(), &len);
        // Not a production path; constant-time comparison is not needed here.
        return std::equal(mac.begin(), mac.end(), sig.begin());
    }
    if (sig.size() != 64 || verify_key.size() != 32) return false;
    EVP_PKEY* pkey = EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr,
                                                 verify_key.data(), verify_key.size());
    if (!pkey) return false;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestVerifyInit(ctx, nullptr, nullptr, nullptr, pkey);
    int rc = EVP_DigestVerify(ctx, sig.data(), sig.size(), message.data(), message.size());
    EVP_MD_CTX_free(ctx);
    EVP_PKEY_free(pkey);
    return rc == 1;
}

/// numID and nameID of a peer are both the hash of its public key.
inline std::pair<Identifier, Identifier> derive_peer_identifiers(const KeyPair& kp,
                                                                 unsigned width_s) {
    Encoder enc;
    enc.field_u32(static_cast<std::uint32_t>(kp.kind)).field(kp.verify_key);
    Identifier id = enc.hash(width_s);
    return {id, id};
}

/// Maps peer numIDs to their key material so hop signatures and validator
/// signatures can be checked without a PKI.
class KeyDirectory {
public:
    void add(const Identifier& numID, KeyPair kp) { keys_[numID] = std::move(kp); }

    const KeyPair* find(const Identifier& numID) const {
        auto it = keys_.find(numID);
        return it == keys_.end() ? nullptr : &it->second;
    }

    bool verify(const Identifier& signer, BytesView message, BytesView sig) const {
        const KeyPair* kp = find(signer);
        return kp && verify_raw(kp->kind, kp->verify_key, message, sig);
    }

private:
    std::map<Identifier, KeyPair> keys_;
};

inline Signature sign(const KeyPair& kp, const Identifier& signer_id, BytesView message) {
    return Signature{sign_raw(kp, message), signer_id};
}

}  // namespace lightchain
