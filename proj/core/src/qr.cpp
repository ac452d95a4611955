#include "zkqr/qr.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include "zkqr/errors.hpp"

namespace zkqr {

namespace {

constexpr int kMinVersion = 1;
constexpr int kMaxVersion = 40;

// ISO/IEC 18004 error-correction structure; index [level][version],
// version 0 unused. Level order: L, M, Q, H.
constexpr int8_t kEccPerBlock[4][41] = {
    {-1, 7, 10, 15, 20, 26, 18, 20, 24, 30, 18, 20, 24, 26, 30, 22, 24, 28, 30, 28,
     28, 28, 28, 30, 30, 26, 28, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
    {-1, 10, 16, 26, 18, 24, 16, 18, 22, 22, 26, 30, 22, 22, 24, 24, 28, 28, 26, 26,
     26, 26, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28, 28},
    {-1, 13, 22, 18, 26, 18, 24, 18, 22, 20, 24, 28, 26, 24, 20, 30, 24, 28, 28, 26,
     30, 28, 30, 30, 30, 30, 28, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
    {-1, 17, 28, 22, 16, 22, 28, 26, 26, 24, 28, 24, 28, 22, 24, 24, 30, 28, 28, 26,
     28, 30, 24, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30, 30},
};

constexpr int8_t kNumBlocks[4][41] = {
    {-1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 4, 4, 4, 4, 4, 6, 6, 6, 6, 7,
     8, 8, 9, 9, 10, 12, 12, 12, 13, 14, 15, 16, 17, 18, 19, 19, 20, 21, 22, 24, 25},
    {-1, 1, 1, 1, 2, 2, 4, 4, 4, 5, 5, 5, 8, 9, 9, 10, 10, 11, 13, 14,
     16, 17, 17, 18, 20, 21, 23, 25, 26, 28, 29, 31, 33, 35, 37, 38, 40, 43, 45, 47, 49},
    {-1, 1, 1, 2, 2, 4, 4, 6, 6, 8, 8, 8, 10, 12, 16, 12, 17, 16, 18, 21,
     20, 23, 23, 25, 27, 29, 34, 34, 35, 38, 40, 43, 45, 48, 51, 53, 56, 59, 62, 65, 68},
    {-1, 1, 1, 2, 4, 4, 4, 5, 6, 8, 8, 11, 11, 16, 16, 18, 16, 19, 21, 25,
     25, 25, 34, 30, 32, 35, 37, 40, 42, 45, 48, 51, 54, 57, 60, 63, 66, 70, 74, 77, 81},
};

int ecc_format_bits(QrEcc level) {
    switch (level) {
        case QrEcc::low: return 1;
        case QrEcc::medium: return 0;
        case QrEcc::quartile: return 3;
        case QrEcc::high: return 2;
    }
    std::abort();
}

QrEcc ecc_from_format_bits(int bits) {
    switch (bits & 3) {
        case 1: return QrEcc::low;
        case 0: return QrEcc::medium;
        case 3: return QrEcc::quartile;
        default: return QrEcc::high;
    }
}

int raw_data_modules(int version) {
    int result = (16 * version + 128) * version + 64;
    if (version >= 2) {
        const int num_align = version / 7 + 2;
        result -= (25 * num_align - 10) * num_align - 55;
        if (version >= 7) result -= 36;
    }
    return result;
}

int total_codewords(int version) { return raw_data_modules(version) / 8; }

int num_data_codewords(int version, QrEcc level) {
    const int li = static_cast<int>(level);
    return total_codewords(version) -
           kEccPerBlock[li][version] * kNumBlocks[li][version];
}

int length_field_bits(int version) { return version <= 9 ? 8 : 16; }

/*-------------------- GF(256) and Reed-Solomon --------------------*/

// Field GF(2^8) with reduction polynomial x^8+x^4+x^3+x^2+1 (0x11d),
// generator alpha = 2, as mandated for QR symbols.
struct GaloisField {
    std::array<uint8_t, 512> exp{};
    std::array<uint8_t, 256> log{};

    GaloisField() {
        int x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[static_cast<size_t>(i)] = static_cast<uint8_t>(x);
            log[static_cast<size_t>(x)] = static_cast<uint8_t>(i);
            x <<= 1;
            if (x & 0x100) x ^= 0x11d;
        }
        for (int i = 255; i < 512; ++i) {
            exp[static_cast<size_t>(i)] = exp[static_cast<size_t>(i - 255)];
        }
    }

    uint8_t mul(uint8_t a, uint8_t b) const {
        if (a == 0 || b == 0) return 0;
        return exp[static_cast<size_t>(log[a]) + log[b]];
    }
    uint8_t pow_alpha(int e) const {  // alpha^e, any integer e
        e %= 255;
        if (e < 0) e += 255;
        return exp[static_cast<size_t>(e)];
    }
    uint8_t inv(uint8_t a) const {
        if (a == 0) throw QrDecodeError("division by zero in GF(256)");
        return exp[static_cast<size_t>(255 - log[a])];
    }
    uint8_t div(uint8_t a, uint8_t b) const { return mul(a, inv(b)); }
};

const GaloisField& gf() {
    static const GaloisField field;
    return field;
}

// Monic generator polynomial (x - a^0)(x - a^1)...(x - a^(degree-1)),
// stored without the leading 1.
std::vector<uint8_t> rs_divisor(int degree) {
    std::vector<uint8_t> result(static_cast<size_t>(degree), 0);
    result.back() = 1;
    uint8_t root = 1;
    for (int i = 0; i < degree; ++i) {
        for (size_t j = 0; j < result.size(); ++j) {
            result[j] = gf().mul(result[j], root);
            if (j + 1 < result.size()) result[j] ^= result[j + 1];
        }
        root = gf().mul(root, 0x02);
    }
    return result;
}

std::vector<uint8_t> rs_remainder(std::span<const uint8_t> data,
                                  const std::vector<uint8_t>& divisor) {
    std::vector<uint8_t> result(divisor.size(), 0);
    for (uint8_t b : data) {
        const uint8_t factor = b ^ result.front();
        result.erase(result.begin());
        result.push_back(0);
        for (size_t i = 0; i < result.size(); ++i) {
            result[i] ^= gf().mul(divisor[i], factor);
        }
    }
    return result;
}

// In-place Reed-Solomon correction of one block (data || ecc).
// Berlekamp-Massey for the error locator, Chien search for positions,
// Forney for magnitudes. Throws QrDecodeError when the error count
// exceeds the block's correction capacity.
void rs_correct_block(std::vector<uint8_t>& block, int ecc_len) {
    const int n = static_cast<int>(block.size());
    std::vector<uint8_t> syndromes(static_cast<size_t>(ecc_len), 0);
    bool clean = true;
    for (int j = 0; j < ecc_len; ++j) {
        uint8_t s = 0;
        for (int i = 0; i < n; ++i) {
            // received polynomial evaluated at alpha^j; byte i carries x^(n-1-i)
            s ^= gf().mul(block[static_cast<size_t>(i)], gf().pow_alpha(j * (n - 1 - i)));
        }
        syndromes[static_cast<size_t>(j)] = s;
        if (s != 0) clean = false;
    }
    if (clean) return;

    // Berlekamp-Massey
    std::vector<uint8_t> locator = {1};
    std::vector<uint8_t> prev = {1};
    int errors = 0;
    int shift = 1;
    uint8_t prev_disc = 1;
    for (int step = 0; step < ecc_len; ++step) {
        uint8_t disc = syndromes[static_cast<size_t>(step)];
        for (int i = 1; i <= errors && i < static_cast<int>(locator.size()); ++i) {
            disc ^= gf().mul(locator[static_cast<size_t>(i)],
                             syndromes[static_cast<size_t>(step - i)]);
        }
        if (disc == 0) {
            ++shift;
            continue;
        }
        const uint8_t ratio = gf().div(disc, prev_disc);
        std::vector<uint8_t> next = locator;
        if (next.size() < prev.size() + static_cast<size_t>(shift)) {
            next.resize(prev.size() + static_cast<size_t>(shift), 0);
        }
        for (size_t i = 0; i < prev.size(); ++i) {
            next[i + static_cast<size_t>(shift)] ^= gf().mul(prev[i], ratio);
        }
        if (2 * errors <= step) {
            prev = locator;
            prev_disc = disc;
            errors = step + 1 - errors;
            shift = 1;
        } else {
            ++shift;
        }
        locator = std::move(next);
    }
    if (errors > ecc_len / 2) throw QrDecodeError("too many errors in QR block");

    // Chien search over all byte positions
    std::vector<int> positions;
    for (int pos = 0; pos < n; ++pos) {
        const int power = n - 1 - pos;  // byte pos carries x^power
        uint8_t value = 0;
        for (size_t i = 0; i < locator.size(); ++i) {
            value ^= gf().mul(locator[i], gf().pow_alpha(-power * static_cast<int>(i)));
        }
        if (value == 0) positions.push_back(pos);
    }
    if (static_cast<int>(positions.size()) != errors) {
        throw QrDecodeError("QR block error locator is inconsistent");
    }

    // Forney: omega = (syndrome poly * locator) mod x^ecc_len
    std::vector<uint8_t> omega(static_cast<size_t>(ecc_len), 0);
    for (size_t i = 0; i < omega.size(); ++i) {
        uint8_t acc = 0;
        for (size_t j = 0; j <= i && j < locator.size(); ++j) {
            acc ^= gf().mul(locator[j], syndromes[i - j]);
        }
        omega[i] = acc;
    }
    for (int pos : positions) {
        const int power = n - 1 - pos;
        const uint8_t x_inv = gf().pow_alpha(-power);
        uint8_t omega_val = 0;
        for (size_t i = 0; i < omega.size(); ++i) {
            omega_val ^= gf().mul(omega[i], gf().pow_alpha(-power * static_cast<int>(i)));
        }
        uint8_t deriv = 0;  // formal derivative keeps odd-degree terms only
        for (size_t i = 1; i < locator.size(); i += 2) {
            deriv ^= gf().mul(locator[i], gf().pow_alpha(-power * static_cast<int>(i - 1)));
        }
        if (deriv == 0) throw QrDecodeError("QR block correction failed");
        const uint8_t magnitude = gf().mul(gf().pow_alpha(power), gf().div(omega_val, deriv));
        block[static_cast<size_t>(pos)] ^= magnitude;
        (void)x_inv;
    }

    // The corrected word must be a clean codeword.
    for (int j = 0; j < ecc_len; ++j) {
        uint8_t s = 0;
        for (int i = 0; i < n; ++i) {
            s ^= gf().mul(block[static_cast<size_t>(i)], gf().pow_alpha(j * (n - 1 - i)));
        }
        if (s != 0) throw QrDecodeError("QR block correction failed");
    }
}

/*-------------------- block interleaving --------------------*/

struct BlockLayout {
    int num_blocks;
    int ecc_len;
    int short_data_len;     // data codewords in a short block
    int num_short_blocks;   // short blocks come first

    int data_len(int block_index) const {
        return short_data_len + (block_index < num_short_blocks ? 0 : 1);
    }
};

BlockLayout block_layout(int version, QrEcc level) {
    const int li = static_cast<int>(level);
    const int num_blocks = kNumBlocks[li][version];
    const int ecc_len = kEccPerBlock[li][version];
    const int raw = total_codewords(version);
    const int num_short = num_blocks - raw % num_blocks;
    const int short_total = raw / num_blocks;
    return BlockLayout{num_blocks, ecc_len, short_total - ecc_len, num_short};
}

std::vector<uint8_t> interleave_with_ecc(std::span<const uint8_t> data, int version,
                                         QrEcc level) {
    const BlockLayout layout = block_layout(version, level);
    const auto divisor = rs_divisor(layout.ecc_len);

    std::vector<std::vector<uint8_t>> data_blocks;
    std::vector<std::vector<uint8_t>> ecc_blocks;
    size_t k = 0;
    for (int b = 0; b < layout.num_blocks; ++b) {
        const size_t len = static_cast<size_t>(layout.data_len(b));
        std::vector<uint8_t> dat(data.begin() + k, data.begin() + k + len);
        k += len;
        ecc_blocks.push_back(rs_remainder(dat, divisor));
        data_blocks.push_back(std::move(dat));
    }

    std::vector<uint8_t> out;
    out.reserve(static_cast<size_t>(total_codewords(version)));
    const size_t max_data = static_cast<size_t>(layout.short_data_len + 1);
    for (size_t i = 0; i < max_data; ++i) {
        for (int b = 0; b < layout.num_blocks; ++b) {
            if (i < data_blocks[static_cast<size_t>(b)].size()) {
                out.push_back(data_blocks[static_cast<size_t>(b)][i]);
            }
        }
    }
    for (int i = 0; i < layout.ecc_len; ++i) {
        for (int b = 0; b < layout.num_blocks; ++b) {
            out.push_back(ecc_blocks[static_cast<size_t>(b)][static_cast<size_t>(i)]);
        }
    }
    return out;
}

// Inverse of interleave_with_ecc: raw stream -> per-block (data || ecc).
std::vector<std::vector<uint8_t>> deinterleave(std::span<const uint8_t> raw, int version,
                                               QrEcc level) {
    const BlockLayout layout = block_layout(version, level);
    std::vector<std::vector<uint8_t>> blocks(static_cast<size_t>(layout.num_blocks));
    for (int b = 0; b < layout.num_blocks; ++b) {
        blocks[static_cast<size_t>(b)].resize(
            static_cast<size_t>(layout.data_len(b) + layout.ecc_len));
    }
    size_t k = 0;
    const size_t max_data = static_cast<size_t>(layout.short_data_len + 1);
    for (size_t i = 0; i < max_data; ++i) {
        for (int b = 0; b < layout.num_blocks; ++b) {
            if (i < static_cast<size_t>(layout.data_len(b))) {
                blocks[static_cast<size_t>(b)][i] = raw[k++];
            }
        }
    }
    for (int i = 0; i < layout.ecc_len; ++i) {
        for (int b = 0; b < layout.num_blocks; ++b) {
            const size_t at = static_cast<size_t>(layout.data_len(b) + i);
            blocks[static_cast<size_t>(b)][at] = raw[k++];
        }
    }
    return blocks;
}

/*-------------------- symbol grid --------------------*/

std::vector<int> alignment_positions(int version) {
    if (version == 1) return {};
    const int num_align = version / 7 + 2;
    const int size = version * 4 + 17;
    const int step = (version == 32)
                         ? 26
                         : (version * 4 + num_align * 2 + 1) / (2 * num_align - 2) * 2;
    std::vector<int> result;
    for (int i = 0, pos = size - 7; i < num_align - 1; ++i, pos -= step) {
        result.insert(result.begin(), pos);
    }
    result.insert(result.begin(), 6);
    return result;
}

// Module matrix under construction, tracking which positions are
// function patterns (never data).
struct SymbolGrid {
    int version;
    int size;
    std::vector<uint8_t> modules;
    std::vector<uint8_t> is_function;

    explicit SymbolGrid(int ver)
        : version(ver),
          size(ver * 4 + 17),
          modules(static_cast<size_t>(size) * size, 0),
          is_function(static_cast<size_t>(size) * size, 0) {
        draw_function_patterns();
    }

    size_t idx(int x, int y) const {
        return static_cast<size_t>(y) * static_cast<size_t>(size) + static_cast<size_t>(x);
    }
    bool get(int x, int y) const { return modules[idx(x, y)] != 0; }
    void set(int x, int y, bool dark) { modules[idx(x, y)] = dark ? 1 : 0; }
    bool function_at(int x, int y) const { return is_function[idx(x, y)] != 0; }
    void set_function(int x, int y, bool dark) {
        modules[idx(x, y)] = dark ? 1 : 0;
        is_function[idx(x, y)] = 1;
    }

    void draw_finder(int cx, int cy) {
        for (int dy = -4; dy <= 4; ++dy) {
            for (int dx = -4; dx <= 4; ++dx) {
                const int x = cx + dx;
                const int y = cy + dy;
                if (x < 0 || x >= size || y < 0 || y >= size) continue;
                const int dist = std::max(std::abs(dx), std::abs(dy));
                set_function(x, y, dist != 2 && dist != 4);
            }
        }
    }

    void draw_alignment(int cx, int cy) {
        for (int dy = -2; dy <= 2; ++dy) {
            for (int dx = -2; dx <= 2; ++dx) {
                set_function(cx + dx, cy + dy, std::max(std::abs(dx), std::abs(dy)) != 1);
            }
        }
    }

    void draw_function_patterns() {
        for (int i = 0; i < size; ++i) {
            set_function(6, i, i % 2 == 0);
            set_function(i, 6, i % 2 == 0);
        }
        draw_finder(3, 3);
        draw_finder(size - 4, 3);
        draw_finder(3, size - 4);

        const auto align = alignment_positions(version);
        const size_t n = align.size();
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                const bool in_finder = (i == 0 && j == 0) || (i == 0 && j == n - 1) ||
                                       (i == n - 1 && j == 0);
                if (!in_finder) draw_alignment(align[i], align[j]);
            }
        }
        draw_format_bits(QrEcc::low, 0);  // reserve the format areas
        draw_version_info();
    }

    void draw_format_bits(QrEcc level, int mask) {
        const int data = ecc_format_bits(level) << 3 | mask;
        int rem = data;
        for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537);
        const int bits = ((data << 10) | rem) ^ 0x5412;

        auto bit = [bits](int i) { return ((bits >> i) & 1) != 0; };
        for (int i = 0; i <= 5; ++i) set_function(8, i, bit(i));
        set_function(8, 7, bit(6));
        set_function(8, 8, bit(7));
        set_function(7, 8, bit(8));
        for (int i = 9; i < 15; ++i) set_function(14 - i, 8, bit(i));

        for (int i = 0; i < 8; ++i) set_function(size - 1 - i, 8, bit(i));
        for (int i = 8; i < 15; ++i) set_function(8, size - 15 + i, bit(i));
        set_function(8, size - 8, true);  // dark module
    }

    void draw_version_info() {
        if (version < 7) return;
        int rem = version;
        for (int i = 0; i < 12; ++i) rem = (rem << 1) ^ ((rem >> 11) * 0x1f25);
        const long bits = static_cast<long>(version) << 12 | rem;
        for (int i = 0; i < 18; ++i) {
            const bool bit = ((bits >> i) & 1) != 0;
            const int a = size - 11 + i % 3;
            const int b = i / 3;
            set_function(a, b, bit);
            set_function(b, a, bit);
        }
    }

    // Zigzag traversal of data positions; identical for placement and
    // extraction. Column 6 (the vertical timing pattern) is stepped over.
    template <typename Fn>
    void for_each_data_position(Fn&& fn) const {
        for (int right = size - 1; right >= 1; right -= 2) {
            if (right == 6) right = 5;
            for (int vert = 0; vert < size; ++vert) {
                for (int j = 0; j < 2; ++j) {
                    const int x = right - j;
                    const bool upward = ((right + 1) & 2) == 0;
                    const int y = upward ? size - 1 - vert : vert;
                    if (!function_at(x, y)) fn(x, y);
                }
            }
        }
    }

    void place_codewords(std::span<const uint8_t> codewords) {
        size_t bit_index = 0;
        const size_t total_bits = codewords.size() * 8;
        for_each_data_position([&](int x, int y) {
            if (bit_index < total_bits) {
                const uint8_t byte = codewords[bit_index >> 3];
                set(x, y, ((byte >> (7 - (bit_index & 7))) & 1) != 0);
                ++bit_index;
            } else {
                set(x, y, false);  // remainder bits
            }
        });
    }

    std::vector<uint8_t> extract_codewords() const {
        std::vector<uint8_t> out(static_cast<size_t>(total_codewords(version)), 0);
        size_t bit_index = 0;
        const size_t total_bits = out.size() * 8;
        for_each_data_position([&](int x, int y) {
            if (bit_index < total_bits) {
                if (get(x, y)) out[bit_index >> 3] |= uint8_t(1) << (7 - (bit_index & 7));
                ++bit_index;
            }
        });
        return out;
    }

    static bool mask_predicate(int mask, int x, int y) {
        switch (mask) {
            case 0: return (x + y) % 2 == 0;
            case 1: return y % 2 == 0;
            case 2: return x % 3 == 0;
            case 3: return (x + y) % 3 == 0;
            case 4: return (x / 3 + y / 2) % 2 == 0;
            case 5: return x * y % 2 + x * y % 3 == 0;
            case 6: return (x * y % 2 + x * y % 3) % 2 == 0;
            case 7: return ((x + y) % 2 + x * y % 3) % 2 == 0;
            default: return false;
        }
    }

    // XOR mask; applying twice restores the grid.
    void apply_mask(int mask) {
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                if (!function_at(x, y) && mask_predicate(mask, x, y)) {
                    modules[idx(x, y)] ^= 1;
                }
            }
        }
    }

    long penalty_score() const {
        long score = 0;
        // adjacent same-color runs, rows and columns
        for (int y = 0; y < size; ++y) {
            bool color = get(0, y);
            int run = 1;
            for (int x = 1; x <= size; ++x) {
                if (x < size && get(x, y) == color) {
                    ++run;
                } else {
                    if (run >= 5) score += 3 + (run - 5);
                    if (x < size) {
                        color = get(x, y);
                        run = 1;
                    }
                }
            }
        }
        for (int x = 0; x < size; ++x) {
            bool color = get(x, 0);
            int run = 1;
            for (int y = 1; y <= size; ++y) {
                if (y < size && get(x, y) == color) {
                    ++run;
                } else {
                    if (run >= 5) score += 3 + (run - 5);
                    if (y < size) {
                        color = get(x, y);
                        run = 1;
                    }
                }
            }
        }
        // 2x2 blocks
        for (int y = 0; y < size - 1; ++y) {
            for (int x = 0; x < size - 1; ++x) {
                const bool c = get(x, y);
                if (c == get(x + 1, y) && c == get(x, y + 1) && c == get(x + 1, y + 1)) {
                    score += 3;
                }
            }
        }
        // finder-like 1:1:3:1:1 patterns with a 4-wide light flank
        auto scan_line = [&](auto at, int len) {
            std::vector<int> runs;
            std::vector<bool> colors;
            bool color = at(0);
            int run = 1;
            for (int i = 1; i <= len; ++i) {
                if (i < len && at(i) == color) {
                    ++run;
                } else {
                    runs.push_back(run);
                    colors.push_back(color);
                    if (i < len) {
                        color = at(i);
                        run = 1;
                    }
                }
            }
            for (size_t i = 0; i + 4 < runs.size(); ++i) {
                if (!colors[i]) continue;  // pattern core starts dark
                const int n = runs[i];
                if (runs[i + 1] == n && runs[i + 2] == 3 * n && runs[i + 3] == n &&
                    runs[i + 4] == n) {
                    const bool left_light = i == 0 || runs[i - 1] >= 4;
                    const bool right_light = i + 5 >= runs.size() || runs[i + 5] >= 4;
                    if (left_light || right_light) score += 40;
                }
            }
        };
        for (int y = 0; y < size; ++y) {
            scan_line([&](int x) { return get(x, y); }, size);
        }
        for (int x = 0; x < size; ++x) {
            scan_line([&](int y) { return get(x, y); }, size);
        }
        // dark-module balance, 10 points per 5% step away from 50%
        long dark = 0;
        for (uint8_t m : modules) dark += m;
        const long total = static_cast<long>(size) * size;
        const long k = (std::labs(dark * 20 - total * 10) + total - 1) / total;
        score += 10 * (k > 0 ? k - 1 : 0);
        return score;
    }
};

/*-------------------- format info reading --------------------*/

int format_codeword(QrEcc level, int mask) {
    const int data = ecc_format_bits(level) << 3 | mask;
    int rem = data;
    for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537);
    return ((data << 10) | rem) ^ 0x5412;
}

int hamming15(int a, int b) {
    int x = (a ^ b) & 0x7fff;
    int count = 0;
    while (x) {
        x &= x - 1;
        ++count;
    }
    return count;
}

struct FormatInfo {
    QrEcc level;
    int mask;
};

// Matches both transmitted copies against all 32 valid codewords; the
// format BCH code corrects up to 3 bit errors.
FormatInfo read_format_info(const QrPayload& qr) {
    const int size = qr.size;
    auto get = [&](int x, int y) { return qr.module(x, y) ? 1 : 0; };

    int copy1 = 0;
    for (int i = 0; i <= 5; ++i) copy1 |= get(8, i) << i;
    copy1 |= get(8, 7) << 6;
    copy1 |= get(8, 8) << 7;
    copy1 |= get(7, 8) << 8;
    for (int i = 9; i < 15; ++i) copy1 |= get(14 - i, 8) << i;

    int copy2 = 0;
    for (int i = 0; i < 8; ++i) copy2 |= get(size - 1 - i, 8) << i;
    for (int i = 8; i < 15; ++i) copy2 |= get(8, size - 15 + i) << i;

    int best_distance = 4;
    FormatInfo best{QrEcc::medium, -1};
    for (int ecc = 0; ecc < 4; ++ecc) {
        for (int mask = 0; mask < 8; ++mask) {
            const int expected = format_codeword(ecc_from_format_bits(ecc), mask);
            const int d = std::min(hamming15(copy1, expected), hamming15(copy2, expected));
            if (d < best_distance) {
                best_distance = d;
                best = FormatInfo{ecc_from_format_bits(ecc), mask};
            }
        }
    }
    if (best.mask < 0) throw QrDecodeError("unreadable QR format information");
    return best;
}

/*-------------------- bit stream parsing --------------------*/

class BitReader {
public:
    explicit BitReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}
    size_t remaining() const { return bytes_.size() * 8 - pos_; }
    uint32_t take(int count) {
        uint32_t value = 0;
        for (int i = 0; i < count; ++i) {
            const size_t p = pos_++;
            value = (value << 1) | ((bytes_[p >> 3] >> (7 - (p & 7))) & 1);
        }
        return value;
    }

private:
    std::span<const uint8_t> bytes_;
    size_t pos_ = 0;
};

std::vector<uint8_t> parse_byte_mode_stream(std::span<const uint8_t> data, int version) {
    BitReader reader(data);
    if (reader.remaining() < 4) throw QrDecodeError("QR data stream truncated");
    const uint32_t mode = reader.take(4);
    if (mode == 0) return {};  // terminator only: empty message
    if (mode != 0x4) {
        throw QrDecodeError("unsupported QR mode (only byte mode is produced here)");
    }
    const int count_bits = length_field_bits(version);
    if (reader.remaining() < static_cast<size_t>(count_bits)) {
        throw QrDecodeError("QR data stream truncated");
    }
    const uint32_t count = reader.take(count_bits);
    if (reader.remaining() < static_cast<size_t>(count) * 8) {
        throw QrDecodeError("QR byte segment exceeds the data stream");
    }
    std::vector<uint8_t> payload;
    payload.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        payload.push_back(static_cast<uint8_t>(reader.take(8)));
    }
    return payload;
}

}  // namespace

/*-------------------- public surface --------------------*/

std::string_view to_string(QrEcc level) {
    switch (level) {
        case QrEcc::low: return "L";
        case QrEcc::medium: return "M";
        case QrEcc::quartile: return "Q";
        case QrEcc::high: return "H";
    }
    return "?";
}

QrEcc ecc_from_string(std::string_view name) {
    if (name == "L" || name == "l") return QrEcc::low;
    if (name == "M" || name == "m") return QrEcc::medium;
    if (name == "Q" || name == "q") return QrEcc::quartile;
    if (name == "H" || name == "h") return QrEcc::high;
    throw ParameterError("unknown QR error-correction level: " + std::string(name));
}

int qr_byte_capacity(int version, QrEcc level) {
    if (version < kMinVersion || version > kMaxVersion) {
        throw ParameterError("QR version must be 1..40");
    }
    const int bits = num_data_codewords(version, level) * 8 - 4 - length_field_bits(version);
    return bits < 0 ? 0 : bits / 8;
}

QrPayload qr_encode(std::span<const uint8_t> payload, QrEcc level) {
    int version = 0;
    for (int v = kMinVersion; v <= kMaxVersion; ++v) {
        if (qr_byte_capacity(v, level) >= static_cast<int>(payload.size())) {
            version = v;
            break;
        }
    }
    if (version == 0) {
        throw CapacityError("payload of " + std::to_string(payload.size()) +
                            " bytes does not fit QR version 40 at level " +
                            std::string(to_string(level)));
    }

    // mode + length + payload + terminator + pad to the data capacity
    const size_t data_capacity_bits =
        static_cast<size_t>(num_data_codewords(version, level)) * 8;
    std::vector<uint8_t> data;
    data.reserve(data_capacity_bits / 8);
    size_t bits = 0;
    auto append_bits = [&](uint32_t value, int count) {
        for (int i = count - 1; i >= 0; --i) {
            if (bits % 8 == 0) data.push_back(0);
            if ((value >> i) & 1) data.back() |= uint8_t(1) << (7 - (bits & 7));
            ++bits;
        }
    };
    append_bits(0x4, 4);
    append_bits(static_cast<uint32_t>(payload.size()), length_field_bits(version));
    for (uint8_t b : payload) append_bits(b, 8);
    const size_t terminator = std::min<size_t>(4, data_capacity_bits - bits);
    append_bits(0, static_cast<int>(terminator));
    if (bits % 8 != 0) append_bits(0, static_cast<int>(8 - bits % 8));
    for (uint8_t pad = 0xec; bits < data_capacity_bits; pad ^= 0xec ^ 0x11) {
        append_bits(pad, 8);
    }

    const auto codewords = interleave_with_ecc(data, version, level);

    SymbolGrid grid(version);
    grid.place_codewords(codewords);

    int best_mask = 0;
    long best_score = -1;
    for (int mask = 0; mask < 8; ++mask) {
        grid.apply_mask(mask);
        grid.draw_format_bits(level, mask);
        const long score = grid.penalty_score();
        if (best_score < 0 || score < best_score) {
            best_score = score;
            best_mask = mask;
        }
        grid.apply_mask(mask);  // undo
    }
    grid.apply_mask(best_mask);
    grid.draw_format_bits(level, best_mask);

    QrPayload out;
    out.version = version;
    out.ec_level = level;
    out.size = grid.size;
    out.modules = std::move(grid.modules);
    return out;
}

std::vector<uint8_t> qr_decode(const QrPayload& qr) {
    if (qr.size < 21 || qr.size > 177 || (qr.size - 17) % 4 != 0 ||
        qr.modules.size() != static_cast<size_t>(qr.size) * qr.size) {
        throw QrDecodeError("matrix dimensions are not a QR symbol");
    }
    const int version = (qr.size - 17) / 4;
    const FormatInfo format = read_format_info(qr);

    // Rebuild the function map, unmask, then lift the codewords out.
    SymbolGrid grid(version);
    grid.modules = qr.modules;
    grid.apply_mask(format.mask);
    const auto raw = grid.extract_codewords();

    auto blocks = deinterleave(raw, version, format.level);
    const BlockLayout layout = block_layout(version, format.level);
    std::vector<uint8_t> data;
    data.reserve(static_cast<size_t>(num_data_codewords(version, format.level)));
    for (int b = 0; b < layout.num_blocks; ++b) {
        auto& block = blocks[static_cast<size_t>(b)];
        rs_correct_block(block, layout.ecc_len);
        data.insert(data.end(), block.begin(), block.begin() + layout.data_len(b));
    }
    return parse_byte_mode_stream(data, version);
}

namespace {

// Upright, uniformly scaled symbol locator for synthetic captures:
// binarize, take the dark bounding box, then try every version whose
// module count divides the box evenly and accept the first whose finder
// and timing patterns check out.
QrPayload sample_symbol(const GrayImage& image) {
    uint8_t lo = 255;
    uint8_t hi = 0;
    for (uint8_t p : image.pixels) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    if (image.pixels.empty() || hi - lo < 32) {
        throw QrDecodeError("image carries no QR symbol");
    }
    const uint8_t threshold = static_cast<uint8_t>((lo + hi) / 2);
    auto dark = [&](int x, int y) { return image.at(x, y) < threshold; };

    int min_x = image.width, min_y = image.height, max_x = -1, max_y = -1;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            if (dark(x, y)) {
                min_x = std::min(min_x, x);
                min_y = std::min(min_y, y);
                max_x = std::max(max_x, x);
                max_y = std::max(max_y, y);
            }
        }
    }
    if (max_x < 0) throw QrDecodeError("image carries no QR symbol");
    const int box_w = max_x - min_x + 1;
    const int box_h = max_y - min_y + 1;
    if (box_w != box_h) throw QrDecodeError("dark region is not a square QR symbol");

    for (int version = kMinVersion; version <= kMaxVersion; ++version) {
        const int size = version * 4 + 17;
        if (box_w % size != 0) continue;
        const int px = box_w / size;
        auto module_dark = [&](int mx, int my) {
            return dark(min_x + mx * px + px / 2, min_y + my * px + px / 2);
        };
        // finder pattern shape at the three corners
        auto finder_ok = [&](int ox, int oy) {
            for (int y = 0; y < 7; ++y) {
                for (int x = 0; x < 7; ++x) {
                    const int dist = std::max(std::abs(x - 3), std::abs(y - 3));
                    if (module_dark(ox + x, oy + y) != (dist != 2)) return false;
                }
            }
            return true;
        };
        if (!finder_ok(0, 0) || !finder_ok(size - 7, 0) || !finder_ok(0, size - 7)) {
            continue;
        }
        bool timing_ok = true;
        for (int i = 8; i < size - 8 && timing_ok; ++i) {
            if (module_dark(i, 6) != (i % 2 == 0)) timing_ok = false;
            if (module_dark(6, i) != (i % 2 == 0)) timing_ok = false;
        }
        if (!timing_ok) continue;

        QrPayload qr;
        qr.version = version;
        qr.size = size;
        qr.modules.resize(static_cast<size_t>(size) * size);
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                qr.modules[static_cast<size_t>(y) * size + x] = module_dark(x, y) ? 1 : 0;
            }
        }
        qr.ec_level = read_format_info(qr).level;
        return qr;
    }
    throw QrDecodeError("no QR symbol found in image");
}

}  // namespace

std::vector<uint8_t> qr_decode(const GrayImage& image) {
    return qr_decode(sample_symbol(image));
}

GrayImage qr_render(const QrPayload& qr, int module_pixels, int quiet_modules) {
    if (module_pixels < 1 || quiet_modules < 0) {
        throw ParameterError("invalid QR render geometry");
    }
    const int dim = (qr.size + 2 * quiet_modules) * module_pixels;
    GrayImage image;
    image.width = dim;
    image.height = dim;
    image.pixels.assign(static_cast<size_t>(dim) * dim, 0xff);
    for (int my = 0; my < qr.size; ++my) {
        for (int mx = 0; mx < qr.size; ++mx) {
            if (!qr.module(mx, my)) continue;
            const int x0 = (mx + quiet_modules) * module_pixels;
            const int y0 = (my + quiet_modules) * module_pixels;
            for (int y = y0; y < y0 + module_pixels; ++y) {
                for (int x = x0; x < x0 + module_pixels; ++x) {
                    image.pixels[static_cast<size_t>(y) * dim + x] = 0x00;
                }
            }
        }
    }
    return image;
}

std::string qr_text_art(const QrPayload& qr, int quiet_modules) {
    std::string out;
    const int total = qr.size + 2 * quiet_modules;
    out.reserve(static_cast<size_t>(total) * (static_cast<size_t>(total) * 2 + 1));
    for (int y = -quiet_modules; y < qr.size + quiet_modules; ++y) {
        for (int x = -quiet_modules; x < qr.size + quiet_modules; ++x) {
            const bool dark =
                x >= 0 && x < qr.size && y >= 0 && y < qr.size && qr.module(x, y);
            out += dark ? "██" : "  ";
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace zkqr
