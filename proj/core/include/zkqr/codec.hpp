#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zkqr/protocol.hpp"

namespace zkqr {

// Canonical proof document:
//   {"t":"<hex>","s":"<hex>","nonce":"<32 hex>","timestamp":<uint>,"key_id":"<str>"}
// Field order fixed as listed, no whitespace; t and s are lowercase hex
// zero-padded to 2*ceil(bit_length/8) characters, so every proof at a
// given bit length (and key id) occupies the same number of bytes.
std::vector<uint8_t> encode_proof_json(const Proof& proof, int bit_length);

// Strict parse: exact field set, canonical hex widths and case, 16-byte
// nonce. Integer range checks against p happen at verify time, where the
// parameters are known; passing expected_bit_length > 0 additionally
// pins the t/s hex width here.
Proof decode_proof_json(std::span<const uint8_t> bytes, int expected_bit_length = 0);

}  // namespace zkqr
