#pragma once

#include <cmath>
#include <cstdint>

namespace levytree {

// Counter-based generator: output i of stream (seed, stream) is a fixed hash of
// (key, i), so replicas can be dealt out to workers in any order and still read
// the same numbers. The mixer is the splitmix64 finalizer.
class CounterRng {
public:
    CounterRng() : CounterRng(0, 0) {}
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(derive_key(seed, stream)), counter_(0) {}

    // Substream i of a master seed; used one-per-replica by the Monte Carlo driver.
    static CounterRng substream(std::uint64_t seed, std::uint64_t replica) {
        return CounterRng(seed, replica);
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

    // Uniform on [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe as a log() argument.
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via Box-Muller (cosine branch only; stateless).
    double gaussian() {
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 6.283185307179586476925287 * uniform();
        return r * std::cos(a);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
        return mix(mix(seed + kGamma) + stream * kGamma + 0x632be59bd9b4e019ull);
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

// Fair-coin stream drawing 64 flips per underlying word; the hot loop of the
// simple-random-walk samplers.
class CoinStream {
public:
    explicit CoinStream(CounterRng& rng) : rng_(&rng), bits_(0), left_(0) {}

    // +1 or -1.
    int step() {
        if (left_ == 0) {
            bits_ = rng_->next_u64();
            left_ = 64;
        }
        const int s = (bits_ & 1u) ? 1 : -1;
        bits_ >>= 1;
        --left_;
        return s;
    }

private:
    CounterRng* rng_;
    std::uint64_t bits_;
    int left_;
};

}  // namespace levytree
