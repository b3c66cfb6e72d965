#include "gibbslab/support/rng.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace gibbslab {

namespace {
// boost's normal_distribution is a ziggurat sampler; its output for a given
// engine state is fixed by the library, unlike std::normal_distribution.
thread_local boost::random::normal_distribution<double> g_normal;
}  // namespace

double Rng::normal() { return g_normal(engine_); }

double Rng::uniform() {
    // 53 random bits
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    boost::random::uniform_int_distribution<std::uint64_t> d(0, n - 1);
    return d(engine_);
}

std::complex<double> Rng::complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
}

void Rng::fill_complex_normal(std::span<std::complex<double>> out) {
    for (auto& z : out) {
        double re = normal();
        double im = normal();
        z = {re, im};
    }
}

}  // namespace gibbslab
