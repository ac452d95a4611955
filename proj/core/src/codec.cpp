#include "zkqr/codec.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

#include "zkqr/errors.hpp"
#include "zkqr/hex.hpp"

namespace zkqr {

namespace {

// Minimal JSON string escaping; the canonical form never uses \uXXXX for
// printable ASCII, so re-encoding a decoded document is byte exact.
void append_escaped(std::string& out, std::string_view s) {
    static constexpr char kHex[] = "0123456789abcdef";
    for (char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        if (ch == '"' || ch == '\\') {
            out.push_back('\\');
            out.push_back(ch);
        } else if (c < 0x20) {
            out += "\\u00";
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0x0f]);
        } else {
            out.push_back(ch);
        }
    }
}

}  // namespace

std::vector<uint8_t> encode_proof_json(const Proof& proof, int bit_length) {
    if (bit_length < 1) throw ParameterError("bit_length must be positive");
    const size_t width_chars = 2 * static_cast<size_t>((bit_length + 7) / 8);
    const std::string t_hex = proof.t.to_hex(width_chars);
    const std::string s_hex = proof.s.to_hex(width_chars);
    if (t_hex.size() != width_chars || s_hex.size() != width_chars) {
        throw EncodingError("proof fields exceed the group element width");
    }

    std::string out;
    out.reserve(width_chars * 2 + 128);
    out += "{\"t\":\"";
    out += t_hex;
    out += "\",\"s\":\"";
    out += s_hex;
    out += "\",\"nonce\":\"";
    out += to_hex(proof.nonce);
    out += "\",\"timestamp\":";
    out += std::to_string(proof.timestamp);
    out += ",\"key_id\":\"";
    append_escaped(out, proof.key_id);
    out += "\"}";
    return {out.begin(), out.end()};
}

Proof decode_proof_json(std::span<const uint8_t> bytes, int expected_bit_length) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::parse_error&) {
        throw ParseError("proof document is not valid JSON");
    }
    if (!doc.is_object()) throw SchemaError("proof document must be a JSON object");

    static constexpr const char* kFields[] = {"t", "s", "nonce", "timestamp", "key_id"};
    for (const char* field : kFields) {
        if (!doc.contains(field)) {
            throw SchemaError(std::string("proof document missing field: ") + field);
        }
    }
    if (doc.size() != std::size(kFields)) {
        throw SchemaError("proof document carries unexpected fields");
    }
    if (!doc["t"].is_string() || !doc["s"].is_string() || !doc["nonce"].is_string() ||
        !doc["key_id"].is_string()) {
        throw SchemaError("proof string field has wrong type");
    }
    if (!doc["timestamp"].is_number_unsigned()) {
        throw SchemaError("timestamp must be an unsigned integer");
    }

    const auto t_hex = doc["t"].get<std::string>();
    const auto s_hex = doc["s"].get<std::string>();
    const auto nonce_hex = doc["nonce"].get<std::string>();

    auto check_hex = [](const std::string& hex, const char* field) {
        if (hex.empty() || hex.size() % 2 != 0 || !is_lower_hex(hex)) {
            throw EncodingError(std::string(field) + " must be even-width lowercase hex");
        }
    };
    check_hex(t_hex, "t");
    check_hex(s_hex, "s");
    if (expected_bit_length > 0) {
        const size_t want = 2 * static_cast<size_t>((expected_bit_length + 7) / 8);
        if (t_hex.size() != want || s_hex.size() != want) {
            throw EncodingError("t/s hex width does not match the group bit length");
        }
    }
    if (nonce_hex.size() != 2 * kNonceBytes || !is_lower_hex(nonce_hex)) {
        throw EncodingError("nonce must be exactly 32 lowercase hex characters");
    }

    Proof proof;
    proof.t = BigUint::from_hex(t_hex);
    proof.s = BigUint::from_hex(s_hex);
    const auto nonce_bytes = from_hex(nonce_hex);
    std::copy(nonce_bytes.begin(), nonce_bytes.end(), proof.nonce.begin());
    proof.timestamp = doc["timestamp"].get<uint64_t>();
    proof.key_id = doc["key_id"].get<std::string>();
    return proof;
}

}  // namespace zkqr
