#include "gibbslab/spectral/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "gibbslab/support/error.hpp"

namespace gibbslab {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanCache {
    std::map<std::tuple<std::size_t, int, bool>, fftw_plan> plans;
    ~PlanCache() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        for (auto& [key, p] : plans) fftw_destroy_plan(p);
    }
};

fftw_plan get_plan(std::size_t n, int sign, bool in_place) {
    thread_local PlanCache cache;
    auto key = std::make_tuple(n, sign, in_place);
    auto it = cache.plans.find(key);
    if (it != cache.plans.end()) return it->second;
    // planning is not thread safe in FFTW; execution with new-array execute is
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = in_place ? a : fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!in_place) fftw_free(b);
    fftw_free(a);
    if (!p) throw NumericalFailure("fftw: planning failed");
    cache.plans.emplace(key, p);
    return p;
}

void run(std::span<const cplx> in, std::span<cplx> out, int sign) {
    require(in.size() == out.size(), "dft: size mismatch");
    if (in.empty()) return;
    bool in_place = in.data() == out.data();
    fftw_plan p = get_plan(in.size(), sign, in_place);
    // fftw does not write to the input of an out-of-place c2c plan
    auto* ip = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
    auto* op = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(p, ip, op);
}

}  // namespace

void dft_forward(std::span<const cplx> in, std::span<cplx> out) { run(in, out, FFTW_FORWARD); }
void dft_backward(std::span<const cplx> in, std::span<cplx> out) { run(in, out, FFTW_BACKWARD); }

void to_coefficients(std::span<const cplx> values, std::span<cplx> coeffs) {
    dft_forward(values, coeffs);
    const double inv = 1.0 / static_cast<double>(values.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j) coeffs[j] *= (j % 2 == 0 ? inv : -inv);
}

void from_coefficients(std::span<const cplx> coeffs, std::span<cplx> values) {
    if (coeffs.data() == values.data()) {
        for (std::size_t j = 1; j < values.size(); j += 2) values[j] = -values[j];
        dft_backward(values, values);
        return;
    }
    for (std::size_t j = 0; j < values.size(); ++j) values[j] = (j % 2 == 0 ? coeffs[j] : -coeffs[j]);
    dft_backward(values, values);
}

}  // namespace gibbslab
