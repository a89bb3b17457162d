// Copyright (c) 2026 CGBridge Contributors
// SPDX-License-Identifier: Apache-2.0
#ifndef CGBRIDGE_COMMON_HPP
#define CGBRIDGE_COMMON_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <zlib.h>

namespace cgb {

// ----------------------------- errors -----------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax error; offset is the byte position of the first offending token.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t offset_)
        : Error(msg + " (offset " + std::to_string(offset_) + ")"), offset(offset_) {}
    std::size_t offset;
};

/// A syntax-tree kind with no mapping into the node taxonomy.
struct TaxonomyError : Error {
    TaxonomyError(const std::string& msg, std::vector<std::string> kinds_)
        : Error(msg), kinds(std::move(kinds_)) {}
    std::vector<std::string> kinds;
};

struct ShapeError : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct FormatError : Error {
    using Error::Error;
};

struct ChecksumError : Error {
    using Error::Error;
};

struct DegenerateInput : Error {
    using Error::Error;
};

struct LengthError : Error {
    using Error::Error;
};

/// Training aborted on a non-finite loss; carries the offending batch index.
struct NonFiniteLoss : Error {
    NonFiniteLoss(const std::string& msg, std::size_t batch_id_)
        : Error(msg + " (batch " + std::to_string(batch_id_) + ")"), batch_id(batch_id_) {}
    std::size_t batch_id;
};

/// Frozen-parameter contract violated (decoder checksum changed).
struct FrozenViolation : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// ----------------------------- rng -----------------------------

// Deterministic RNG. std::*_distribution is implementation-defined, so the
// draw logic lives here; same seed => same stream on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    /// Uniform in [0,1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), rejection-sampled.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t r = gen_();
        while (r >= limit) r = gen_();
        return r % n;
    }

    /// Standard normal via Box-Muller (cached spare).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Independent derived stream (splitmix64 over seed and stream id).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// ----------------------------- checksums -----------------------------

inline std::uint32_t crc32_bytes(const void* data, std::size_t len, std::uint32_t seed = 0) {
    return static_cast<std::uint32_t>(
        ::crc32(seed, static_cast<const Bytef*>(data), static_cast<uInt>(len)));
}

// ----------------------------- small string utils -----------------------------

inline bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

inline bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

/// First source line of a byte range (up to but excluding the first '\n').
inline std::string first_line(const std::string& source, std::size_t start, std::size_t end) {
    std::size_t stop = start;
    while (stop < end && source[stop] != '\n') ++stop;
    return source.substr(start, stop - start);
}

}  // namespace cgb

#endif  // CGBRIDGE_COMMON_HPP
