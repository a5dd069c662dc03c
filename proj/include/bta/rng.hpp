#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

#include "bta/errors.hpp"

namespace bta {

/// Deterministic RNG used throughout the library. All randomness flows from
/// one master seed: child streams are derived with split(), so independent
/// pipeline stages replay byte-identically regardless of what the other
/// stages consumed. Normal variates use Box-Muller on top of mt19937_64
/// (std::normal_distribution is implementation-defined and would break
/// replay across standard libraries).
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(mix(seed)) {}

    /// Child stream keyed by an integer tag.
    Rng split(uint64_t tag) const {
        return Rng(mix(seed_base_ ^ mix(tag + 0x9e3779b97f4a7c15ULL)));
    }

    /// Child stream keyed by a label, e.g. "folds" or "init".
    Rng split(std::string_view label) const {
        uint64_t h = 1469598103934665603ULL;  // FNV-1a
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
        return split(h);
    }

    uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return (eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        if (n == 0) throw error("Rng::below: n must be positive");
        // rejection sampling keeps the draw unbiased
        const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                               std::numeric_limits<uint64_t>::max() % n;
        uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    // splitmix64 finalizer; decorrelates adjacent seeds
    static uint64_t mix(uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 eng_;
    uint64_t seed_base_ = eng_();
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace bta
