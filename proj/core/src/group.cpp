#include "zkqr/group.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

#include "zkqr/errors.hpp"
#include "zkqr/hash.hpp"
#include "zkqr/io.hpp"
#include "zkqr/rng.hpp"

namespace zkqr {

namespace {

constexpr uint64_t kSieveBound = 8192;

const std::vector<uint64_t>& small_primes() {
    static const std::vector<uint64_t> primes = [] {
        std::vector<bool> composite(kSieveBound + 1, false);
        std::vector<uint64_t> out;
        for (uint64_t i = 2; i <= kSieveBound; ++i) {
            if (composite[i]) continue;
            out.push_back(i);
            for (uint64_t j = i * i; j <= kSieveBound; j += i) composite[j] = true;
        }
        return out;
    }();
    return primes;
}

// Quick divisibility screen for a Sophie-Germain pair (q, 2q+1); both
// values must avoid every small prime factor before the expensive
// Miller-Rabin rounds run.
bool pair_survives_sieve(const BigUint& q) {
    for (uint64_t r : small_primes()) {
        const uint64_t qr = q.mod_u64(r);
        if (qr == 0) return false;
        if ((2 * qr + 1) % r == 0) return false;
    }
    return true;
}

bool miller_rabin_round(const BigUint& n, const BigUint& n_minus_1, const BigUint& d,
                        int twos, RandomSource& rng) {
    // base uniform in [2, n-2]
    const BigUint base = BigUint(2) + BigUint::random_below(n_minus_1 - BigUint(2), rng);
    BigUint x = base.pow_mod(d, n);
    if (x == BigUint(1) || x == n_minus_1) return true;
    for (int i = 0; i < twos - 1; ++i) {
        x = x.mod_mul(x, n);
        if (x == n_minus_1) return true;
    }
    return false;
}

}  // namespace

bool is_probable_prime(const BigUint& n, int rounds, RandomSource& rng) {
    if (rounds < 1) throw ParameterError("primality rounds must be >= 1");
    if (n < BigUint(2)) return false;

    for (uint64_t r : small_primes()) {
        if (r >= 1000) break;
        if (BigUint(r * r) > n) return true;  // fully trial-divided
        if (n.mod_u64(r) == 0) return n == BigUint(r);
    }

    const BigUint n_minus_1 = n - BigUint(1);
    BigUint d = n_minus_1;
    int twos = 0;
    while (!d.is_odd()) {
        d = d.shr(1);
        ++twos;
    }
    for (int i = 0; i < rounds; ++i) {
        if (!miller_rabin_round(n, n_minus_1, d, twos, rng)) return false;
    }
    return true;
}

bool is_probable_prime(const BigUint& n, int rounds) {
    SystemRng rng;
    return is_probable_prime(n, rounds, rng);
}

bool is_supported_bit_length(int bit_length) {
    if (bit_length >= 5 && bit_length <= 32) return true;
    return bit_length == 256 || bit_length == 512 || bit_length == 1024 || bit_length == 2048;
}

GroupParams generate_params(int bit_length, RandomSource& rng) {
    if (!is_supported_bit_length(bit_length)) {
        throw ParameterError("unsupported bit length " + std::to_string(bit_length) +
                             " (use 5..32 for insecure test groups, or 256/512/1024/2048)");
    }

    // p has exactly bit_length bits iff q = (p-1)/2 has exactly
    // bit_length-1 bits, so draw q with its top bit pinned.
    const int q_bits = bit_length - 1;
    const size_t q_len = static_cast<size_t>((q_bits + 7) / 8);
    const uint8_t top_mask = static_cast<uint8_t>(0xff >> (8 * q_len - static_cast<size_t>(q_bits)));
    const uint8_t top_bit = static_cast<uint8_t>(1u << ((q_bits - 1) % 8));

    std::vector<uint8_t> buf(q_len);
    for (;;) {
        rng.fill(buf);
        buf[0] = static_cast<uint8_t>((buf[0] & top_mask) | top_bit);
        buf[q_len - 1] |= 1;  // odd
        BigUint q = BigUint::from_bytes_be(buf);

        if (bit_length >= 20 && !pair_survives_sieve(q)) continue;
        if (!is_probable_prime(q, 2, rng)) continue;
        BigUint p = q + q + BigUint(1);
        if (!is_probable_prime(p, 2, rng)) continue;
        if (!is_probable_prime(q, kMillerRabinRounds, rng)) continue;
        if (!is_probable_prime(p, kMillerRabinRounds, rng)) continue;

        // Smallest g with g^2 != 1 and g^q != 1 generates the whole
        // group of order 2q; the scan is deterministic and auditable.
        for (uint64_t cand = 2;; ++cand) {
            BigUint g(cand);
            if (g >= p) break;
            if (mod_exp(g, BigUint(2), p) == BigUint(1)) continue;
            if (mod_exp(g, q, p) == BigUint(1)) continue;
            return GroupParams{std::move(p), std::move(g), bit_length};
        }
        // No generator below p means p is not usable (tiny degenerate
        // group); draw a fresh candidate.
    }
}

ValidationReport validate_params(const GroupParams& params) {
    ValidationReport report;
    auto fail = [&report](const char* name) { report.failures.emplace_back(name); };

    if (params.p.bit_length() != params.bit_length) fail(kFailBitLengthMismatch);

    const bool p_prime = params.p >= BigUint(2) && is_probable_prime(params.p);
    if (!p_prime) fail(kFailPNotPrime);

    const BigUint q = params.p.is_zero() ? BigUint(0) : (params.p - BigUint(1)).shr(1);
    const bool safe = params.p >= BigUint(5) && params.p.is_odd() && is_probable_prime(q);
    if (!safe) fail(kFailPNotSafePrime);

    if (params.g <= BigUint(1) || params.g >= params.p) {
        fail(kFailGOutOfRange);
    } else if (params.p >= BigUint(2)) {
        if (mod_exp(params.g, BigUint(2), params.p) == BigUint(1)) fail(kFailGOrderTrivial);
        if (!q.is_zero() && mod_exp(params.g, q, params.p) == BigUint(1)) fail(kFailGNotPrimitive);
    }

    report.ok = report.failures.empty();
    return report;
}

BigUint mod_exp(const BigUint& base, const BigUint& exponent, const BigUint& modulus) {
    if (modulus < BigUint(2)) throw DomainError("modulus must be >= 2");
    return base.pow_mod(exponent, modulus);
}

std::string canonical_params_json(const GroupParams& params) {
    std::string out = "{\"p\":\"";
    out += params.p.to_dec();
    out += "\",\"g\":\"";
    out += params.g.to_dec();
    out += "\",\"bit_length\":";
    out += std::to_string(params.bit_length);
    out += "}";
    return out;
}

ParamsDigest params_digest(const GroupParams& params) {
    const std::string canon = canonical_params_json(params);
    return sha256(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(canon.data()),
                                           canon.size()));
}

void save_params(const GroupParams& params, const std::filesystem::path& path) {
    write_file_atomic(path, canonical_params_json(params));
}

GroupParams load_params(const std::filesystem::path& path) {
    const std::string text = read_file_text(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
        throw ParseError("parameter file is not valid JSON: " + path.string());
    }
    if (!doc.is_object() || !doc.contains("p") || !doc.contains("g") ||
        !doc.contains("bit_length") || !doc["p"].is_string() || !doc["g"].is_string() ||
        !doc["bit_length"].is_number_integer()) {
        throw SchemaError("parameter file must be {\"p\":str,\"g\":str,\"bit_length\":int}");
    }
    GroupParams params;
    params.p = BigUint::from_dec(doc["p"].get<std::string>());
    params.g = BigUint::from_dec(doc["g"].get<std::string>());
    params.bit_length = doc["bit_length"].get<int>();
    return params;
}

}  // namespace zkqr
