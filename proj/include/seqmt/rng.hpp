#pragma once

#include <cmath>
#include <cstdint>

namespace seqmt {

// Counter-mixed xoshiro256++ generator with substream support.
//
// Each (seed, stream) pair yields a statistically independent generator;
// simulations assign stream = replication index so that results do not
// depend on how replications are partitioned across workers.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ull * (stream + 0x632BE59BD9B4E019ull));
        for (auto& w : s_) w = splitmix64(x);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1); never returns an endpoint, so it
    // is safe under log().
    double uniform01() {
        return (static_cast<double>(u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Marsaglia's polar method, second value cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Index into [0, n) without modulo bias (Lemire's method is overkill
    // here; n is tiny in all call sites).
    std::uint64_t below(std::uint64_t n) {
        return u64() % n;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Deterministic derivation of auxiliary seeds (per-probe, per-config, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed ^ (salt * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace seqmt
