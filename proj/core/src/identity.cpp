#include "zkqr/identity.hpp"

#include <nlohmann/json.hpp>

#ifdef __unix__
#include <sys/stat.h>
#endif

#include <mutex>

#include "zkqr/errors.hpp"
#include "zkqr/hex.hpp"
#include "zkqr/io.hpp"
#include "zkqr/rng.hpp"

namespace zkqr {

namespace {

ParamsDigest digest_from_hex(const std::string& hex) {
    const auto bytes = from_hex(hex);
    if (bytes.size() != std::tuple_size_v<ParamsDigest>) {
        throw EncodingError("params_digest must be 32 bytes of hex");
    }
    ParamsDigest d{};
    std::copy(bytes.begin(), bytes.end(), d.begin());
    return d;
}

}  // namespace

KeyPair keygen(const GroupParams& params, RandomSource& rng) {
    // x uniform in [1, p-2]
    const BigUint x = BigUint(1) + BigUint::random_below(params.p - BigUint(2), rng);
    return keypair_from_secret(params, x);
}

KeyPair keypair_from_secret(const GroupParams& params, const BigUint& x) {
    KeyPair kp;
    kp.x = x;
    kp.y = mod_exp(params.g, x, params.p);
    kp.params_digest = params_digest(params);
    return kp;
}

void save_keypair(const KeyPair& keypair, const std::filesystem::path& path) {
    nlohmann::ordered_json doc;
    doc["x"] = keypair.x.to_dec();
    doc["params_digest"] = to_hex(keypair.params_digest);
    write_file_atomic(path, doc.dump(2) + "\n");
#ifdef __unix__
    ::chmod(path.c_str(), S_IRUSR | S_IWUSR);
#endif
}

KeyPair load_keypair(const GroupParams& params, const std::filesystem::path& path) {
    const std::string text = read_file_text(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
        throw ParseError("key file is not valid JSON: " + path.string());
    }
    if (!doc.is_object() || !doc.contains("x") || !doc.contains("params_digest") ||
        !doc["x"].is_string() || !doc["params_digest"].is_string()) {
        throw SchemaError("key file must be {\"x\":str,\"params_digest\":hex}");
    }
    KeyPair kp;
    kp.x = BigUint::from_dec(doc["x"].get<std::string>());
    kp.y = mod_exp(params.g, kp.x, params.p);
    kp.params_digest = digest_from_hex(doc["params_digest"].get<std::string>());
    return kp;
}

KeyRegistry::KeyRegistry(KeyRegistry&& other) noexcept {
    std::unique_lock lock(other.mutex_);
    entries_ = std::move(other.entries_);
    backing_path_ = std::move(other.backing_path_);
}

KeyRegistry& KeyRegistry::operator=(KeyRegistry&& other) noexcept {
    if (this != &other) {
        std::scoped_lock lock(mutex_, other.mutex_);
        entries_ = std::move(other.entries_);
        backing_path_ = std::move(other.backing_path_);
    }
    return *this;
}

KeyRegistry KeyRegistry::open(const std::filesystem::path& path) {
    KeyRegistry reg = std::filesystem::exists(path) ? load(path) : KeyRegistry();
    reg.backing_path_ = path;
    return reg;
}

KeyRegistry KeyRegistry::load(const std::filesystem::path& path) {
    const std::string text = read_file_text(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
        throw ParseError("registry file is not valid JSON: " + path.string());
    }
    if (!doc.is_object()) {
        throw SchemaError("registry file must be a JSON object");
    }
    KeyRegistry reg;
    for (const auto& [key_id, value] : doc.items()) {
        if (!value.is_object() || !value.contains("y") || !value.contains("params_digest") ||
            !value["y"].is_string() || !value["params_digest"].is_string()) {
            throw SchemaError("registry entry for '" + key_id + "' is malformed");
        }
        Entry entry;
        entry.y = BigUint::from_dec(value["y"].get<std::string>());
        entry.params_digest = digest_from_hex(value["params_digest"].get<std::string>());
        reg.entries_.emplace(key_id, std::move(entry));
    }
    return reg;
}

std::string KeyRegistry::serialize() const {
    // std::map iteration gives a canonical (sorted) field order, so
    // save -> load -> save is byte identical.
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [key_id, entry] : entries_) {
        nlohmann::ordered_json e;
        e["y"] = entry.y.to_dec();
        e["params_digest"] = to_hex(entry.params_digest);
        doc[key_id] = std::move(e);
    }
    return doc.dump(2) + "\n";
}

void KeyRegistry::save(const std::filesystem::path& path) const {
    std::shared_lock lock(mutex_);
    write_file_atomic(path, serialize());
}

void KeyRegistry::register_key(const std::string& key_id, const BigUint& y,
                               const ParamsDigest& digest) {
    if (key_id.empty()) throw ValidationError("key id must not be empty");
    if (key_id.size() > kMaxKeyIdLength) {
        throw ValidationError("key id exceeds " + std::to_string(kMaxKeyIdLength) +
                              " characters");
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.emplace(key_id, Entry{y, digest});
    if (!inserted) throw ConflictError("key id already registered: " + key_id);
    if (backing_path_) {
        try {
            write_file_atomic(*backing_path_, serialize());
        } catch (...) {
            entries_.erase(it);
            throw;
        }
    }
}

KeyRegistry::Entry KeyRegistry::lookup_key(const std::string& key_id) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key_id);
    if (it == entries_.end()) throw NotFoundError("unknown key id: " + key_id);
    return it->second;
}

std::optional<KeyRegistry::Entry> KeyRegistry::find(const std::string& key_id) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key_id);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

size_t KeyRegistry::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

}  // namespace zkqr
