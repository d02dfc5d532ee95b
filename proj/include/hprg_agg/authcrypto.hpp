// Copyright 2026 The hprg_agg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HPRG_AGG_AUTHCRYPTO_HPP_
#define HPRG_AGG_AUTHCRYPTO_HPP_

#include <cstddef>

#include "hprg_agg/bytes.hpp"
#include "hprg_agg/rng.hpp"

namespace hprg_agg {

// Ed25519 signatures.
inline constexpr std::size_t kSignatureSize = 64;
inline constexpr std::size_t kSigKeySize = 32;

struct SigKeyPair {
  Bytes ssk;  // 32-byte seed
  Bytes spk;  // 32-byte public key
};

using Signature = Bytes;

SigKeyPair sig_keygen(Rng& rng);
Signature sign(ByteSpan ssk, ByteSpan payload);
// Never throws; malformed keys or signatures verify as false.
bool verify(ByteSpan spk, ByteSpan payload, ByteSpan sig) noexcept;

// Hybrid public-key encryption: ephemeral X25519 against the recipient key,
// HKDF-SHA256 to a 128-bit key, AES-128-GCM with a random 96-bit nonce.
//
// Ciphertext wire format, each part length-prefixed (4-byte big-endian):
//   ephemeral public key (32) || nonce (12) || AEAD body || tag (16)
inline constexpr std::size_t kEncKeySize = 32;
inline constexpr std::size_t kNonceSize = 12;
inline constexpr std::size_t kTagSize = 16;

struct EncKeyPair {
  Bytes csk;
  Bytes cpk;
};

EncKeyPair enc_keygen(Rng& rng);
Bytes encrypt(ByteSpan cpk, ByteSpan plaintext, Rng& rng, ByteSpan aad = {});
// Throws Error(kAuthFailure) on any tampering with ciphertext, nonce, key
// share or associated data, and on malformed input.
Bytes decrypt(ByteSpan csk, ByteSpan ciphertext, ByteSpan aad = {});

}  // namespace hprg_agg

#endif  // HPRG_AGG_AUTHCRYPTO_HPP_
