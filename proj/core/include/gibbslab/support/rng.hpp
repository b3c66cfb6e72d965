#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>

namespace gibbslab {

// splitmix64 finaliser; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based seed derivation: the stream for (seed, a, b) does not depend
// on how many other streams exist or which worker consumes it.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
    return splitmix64(splitmix64(splitmix64(seed) ^ (a + 0x632be59bd9b4e019ULL)) ^ (b + 0x85157af5ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}
    Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t sub = 0)
        : Rng(derive_seed(seed, stream, sub)) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::mt19937_64& engine() noexcept { return engine_; }

    double normal();
    double uniform();  // [0, 1)
    std::uint64_t below(std::uint64_t n);  // uniform on {0..n-1}

    // Re and Im independent N(0,1); E|z|^2 = 2.
    std::complex<double> complex_normal();
    void fill_complex_normal(std::span<std::complex<double>> out);

    Rng split(std::uint64_t stream) const { return Rng(seed_, stream, 0x5eed); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace gibbslab
