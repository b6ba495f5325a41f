#ifndef DOCSYNTH_RANDOM_HPP
#define DOCSYNTH_RANDOM_HPP

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace docsynth {

// Deterministic random stream keyed by (seed, stream). The same key yields
// the same draw sequence on every run and platform: the engine is
// xoshiro256** with splitmix64 state expansion and hand-rolled integer/real
// mappings, so no standard-library distribution variability leaks in.
class RandomSource {
public:
    RandomSource() : RandomSource(0, 0) {}

    RandomSource(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {
        std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    // Child stream for a tagged sub-purpose (retries, per-instance values).
    // Pure function of (seed, stream, tag).
    RandomSource derived(std::uint64_t tag) const {
        std::uint64_t x = seed_ ^ rotl(stream_ + 0x632be59bd9b4e019ULL, 17);
        x ^= 0xbf58476d1ce4e5b9ULL * (tag + 1);
        RandomSource child;
        child.seed_ = seed_;
        child.stream_ = splitmix64(x);
        std::uint64_t y = child.stream_ ^ seed_;
        for (auto& word : child.state_) word = splitmix64(y);
        return child;
    }

    std::uint64_t next_u64() {
        std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n), unbiased (rejection).
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("RandomSource::bounded: n == 0");
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

    // Uniform integer in [lo, hi], inclusive.
    long long uniform_int(long long lo, long long hi) {
        if (lo > hi) throw std::invalid_argument("RandomSource::uniform_int: lo > hi");
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(bounded(span));
    }

    template <typename T>
    const T& choice(const std::vector<T>& options) {
        if (options.empty())
            throw std::invalid_argument("RandomSource::choice: empty option list");
        return options[bounded(options.size())];
    }

    // Fisher-Yates, descending index order.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = bounded(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_[4];
};

} // namespace docsynth

#endif
