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

#include "hprg_agg/authcrypto.hpp"

#include <openssl/evp.h>
#include <openssl/kdf.h>

#include <memory>
#include <stdexcept>

#include "hprg_agg/counters.hpp"
#include "hprg_agg/errors.hpp"

namespace hprg_agg {
namespace {

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct PkeyCtxDeleter {
  void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};
struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};

using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using PkeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;
using CipherCtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

constexpr std::size_t kAeadKeySize = 16;
constexpr std::string_view kKdfInfo = "hprg-agg/enc/v1";

[[noreturn]] void openssl_fail(const char* what) {
  throw std::runtime_error(std::string("openssl: ") + what);
}

[[noreturn]] void auth_fail() {
  throw Error(ErrorCode::kAuthFailure, "ciphertext failed authentication");
}

PkeyPtr private_key(int type, ByteSpan raw) {
  return PkeyPtr(EVP_PKEY_new_raw_private_key(type, nullptr, raw.data(), raw.size()));
}

PkeyPtr public_key(int type, ByteSpan raw) {
  return PkeyPtr(EVP_PKEY_new_raw_public_key(type, nullptr, raw.data(), raw.size()));
}

Bytes raw_public(EVP_PKEY* key) {
  std::size_t len = 0;
  if (EVP_PKEY_get_raw_public_key(key, nullptr, &len) != 1) openssl_fail("pub len");
  Bytes out(len);
  if (EVP_PKEY_get_raw_public_key(key, out.data(), &len) != 1) openssl_fail("pub");
  return out;
}

// X25519(ours, theirs) -> HKDF-SHA256(salt = ephemeral || recipient) -> key.
Bytes derive_key(EVP_PKEY* ours, ByteSpan their_public, ByteSpan ephemeral_pub,
                 ByteSpan recipient_pub) {
  PkeyPtr peer = public_key(EVP_PKEY_X25519, their_public);
  if (!peer) auth_fail();
  PkeyCtxPtr ctx(EVP_PKEY_CTX_new(ours, nullptr));
  if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
      EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) != 1) {
    auth_fail();
  }
  std::size_t len = 0;
  if (EVP_PKEY_derive(ctx.get(), nullptr, &len) != 1) auth_fail();
  Bytes shared(len);
  if (EVP_PKEY_derive(ctx.get(), shared.data(), &len) != 1) auth_fail();
  shared.resize(len);

  ByteWriter salt;
  salt.raw(ephemeral_pub).raw(recipient_pub);
  PkeyCtxPtr kdf(EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr));
  Bytes key(kAeadKeySize);
  std::size_t key_len = key.size();
  if (!kdf || EVP_PKEY_derive_init(kdf.get()) != 1 ||
      EVP_PKEY_CTX_set_hkdf_md(kdf.get(), EVP_sha256()) != 1 ||
      EVP_PKEY_CTX_set1_hkdf_salt(kdf.get(), salt.bytes().data(),
                                  static_cast<int>(salt.bytes().size())) != 1 ||
      EVP_PKEY_CTX_set1_hkdf_key(kdf.get(), shared.data(),
                                 static_cast<int>(shared.size())) != 1 ||
      EVP_PKEY_CTX_add1_hkdf_info(
          kdf.get(), reinterpret_cast<const unsigned char*>(kKdfInfo.data()),
          static_cast<int>(kKdfInfo.size())) != 1 ||
      EVP_PKEY_derive(kdf.get(), key.data(), &key_len) != 1) {
    openssl_fail("hkdf");
  }
  return key;
}

}  // namespace

SigKeyPair sig_keygen(Rng& rng) {
  SigKeyPair kp;
  kp.ssk = rng.bytes(kSigKeySize);
  PkeyPtr key = private_key(EVP_PKEY_ED25519, kp.ssk);
  if (!key) openssl_fail("ed25519 keygen");
  kp.spk = raw_public(key.get());
  return kp;
}

Signature sign(ByteSpan ssk, ByteSpan payload) {
  counters::bump<&OpCounters::sign>();
  PkeyPtr key = private_key(EVP_PKEY_ED25519, ssk);
  if (!key) throw Error(ErrorCode::kInvalidArgument, "invalid signing key");
  MdCtxPtr ctx(EVP_MD_CTX_new());
  Signature sig(kSignatureSize);
  std::size_t len = sig.size();
  if (!ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1 ||
      EVP_DigestSign(ctx.get(), sig.data(), &len, payload.data(), payload.size()) !=
          1) {
    openssl_fail("ed25519 sign");
  }
  sig.resize(len);
  return sig;
}

bool verify(ByteSpan spk, ByteSpan payload, ByteSpan sig) noexcept {
  counters::bump<&OpCounters::verify>();
  if (spk.size() != kSigKeySize || sig.size() != kSignatureSize) return false;
  PkeyPtr key = public_key(EVP_PKEY_ED25519, spk);
  if (!key) return false;
  MdCtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx ||
      EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1) {
    return false;
  }
  return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), payload.data(),
                          payload.size()) == 1;
}

EncKeyPair enc_keygen(Rng& rng) {
  EncKeyPair kp;
  kp.csk = rng.bytes(kEncKeySize);
  PkeyPtr key = private_key(EVP_PKEY_X25519, kp.csk);
  if (!key) openssl_fail("x25519 keygen");
  kp.cpk = raw_public(key.get());
  return kp;
}

Bytes encrypt(ByteSpan cpk, ByteSpan plaintext, Rng& rng, ByteSpan aad) {
  counters::bump<&OpCounters::encrypt>();
  if (cpk.size() != kEncKeySize) {
    throw Error(ErrorCode::kInvalidArgument, "invalid encryption key");
  }
  Bytes eph_secret = rng.bytes(kEncKeySize);
  PkeyPtr eph = private_key(EVP_PKEY_X25519, eph_secret);
  if (!eph) openssl_fail("x25519 ephemeral");
  Bytes eph_pub = raw_public(eph.get());
  Bytes key = derive_key(eph.get(), cpk, eph_pub, cpk);
  Bytes nonce = rng.bytes(kNonceSize);

  CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
  Bytes body(plaintext.size());
  Bytes tag(kTagSize);
  int len = 0;
  if (!ctx ||
      EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceSize, nullptr) != 1 ||
      EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()) != 1 ||
      (!aad.empty() && EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                                         static_cast<int>(aad.size())) != 1) ||
      EVP_EncryptUpdate(ctx.get(), body.data(), &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx.get(), body.data() + len, &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagSize, tag.data()) != 1) {
    openssl_fail("aes-gcm encrypt");
  }
  ByteWriter w;
  w.prefixed(eph_pub).prefixed(nonce).prefixed(body).prefixed(tag);
  return w.take();
}

Bytes decrypt(ByteSpan csk, ByteSpan ciphertext, ByteSpan aad) {
  counters::bump<&OpCounters::decrypt>();
  ByteSpan eph_pub, nonce, body, tag;
  try {
    ByteReader r(ciphertext);
    eph_pub = r.prefixed();
    nonce = r.prefixed();
    body = r.prefixed();
    tag = r.prefixed();
    r.expect_done();
  } catch (const Error&) {
    auth_fail();
  }
  if (eph_pub.size() != kEncKeySize || nonce.size() != kNonceSize ||
      tag.size() != kTagSize) {
    auth_fail();
  }
  PkeyPtr ours = private_key(EVP_PKEY_X25519, csk);
  if (!ours) throw Error(ErrorCode::kInvalidArgument, "invalid decryption key");
  Bytes our_pub = raw_public(ours.get());
  Bytes key = derive_key(ours.get(), eph_pub, eph_pub, our_pub);

  CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
  Bytes plain(body.size());
  Bytes tag_copy(tag.begin(), tag.end());
  int len = 0;
  if (!ctx ||
      EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceSize, nullptr) != 1 ||
      EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()) != 1 ||
      (!aad.empty() && EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                                         static_cast<int>(aad.size())) != 1) ||
      EVP_DecryptUpdate(ctx.get(), plain.data(), &len, body.data(),
                        static_cast<int>(body.size())) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagSize,
                          tag_copy.data()) != 1) {
    auth_fail();
  }
  int final_len = 0;
  if (EVP_DecryptFinal_ex(ctx.get(), plain.data() + len, &final_len) != 1) {
    auth_fail();
  }
  return plain;
}

}  // namespace hprg_agg
