#include "hbo/transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace hbo {

namespace {

// One cached plan per (d, n, sign), with persistent aligned buffers.
// Plans use FFTW_ESTIMATE so planning is deterministic and never touches data.
struct PlanEntry {
    fftw_plan plan = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    std::size_t size = 0;
};

std::map<std::tuple<int, int, int>, PlanEntry>& plan_cache() {
    static std::map<std::tuple<int, int, int>, PlanEntry> cache;
    return cache;
}

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

PlanEntry& get_plan(const Grid& g, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto key = std::make_tuple(g.d, g.n, sign);
    auto& cache = plan_cache();
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    PlanEntry e;
    e.size = g.size;
    e.in = fftw_alloc_complex(g.size);
    e.out = fftw_alloc_complex(g.size);
    if (!e.in || !e.out) throw std::runtime_error("transform: fftw allocation failed");
    int dims[3] = {g.n, g.n, g.n};
    e.plan = fftw_plan_dft(g.d, dims, e.in, e.out, sign, FFTW_ESTIMATE);
    if (!e.plan) throw std::runtime_error("transform: fftw planning failed");
    return cache.emplace(key, e).first->second;
}

// (-1)^(i1+..+id) carries the -L origin offset into FFT wrap-around ordering.
inline double origin_phase(const Grid& g, std::size_t idx) {
    int parity = 0;
    std::size_t rest = idx;
    for (int a = 0; a < g.d; ++a) {
        parity += static_cast<int>(rest % g.n);
        rest /= g.n;
    }
    return (parity & 1) ? -1.0 : 1.0;
}

}  // namespace

SpectralField forward_transform(const RealField& f) {
    const Grid& g = f.grid;
    if (f.v.size() != g.size) throw std::invalid_argument("forward_transform: field size mismatch");
    PlanEntry& p = get_plan(g, FFTW_FORWARD);
    for (std::size_t i = 0; i < g.size; ++i) {
        p.in[i][0] = f.v[i];
        p.in[i][1] = 0.0;
    }
    fftw_execute(p.plan);
    SpectralField F = make_spectral_field(g);
    const double vol = cell_volume(g);
    for (std::size_t i = 0; i < g.size; ++i) {
        double s = vol * origin_phase(g, i);
        F.c[i] = std::complex<double>(s * p.out[i][0], s * p.out[i][1]);
    }
    return F;
}

std::vector<std::complex<double>> inverse_transform_complex(const SpectralField& F) {
    const Grid& g = F.grid;
    if (F.c.size() != g.size) throw std::invalid_argument("inverse_transform: field size mismatch");
    PlanEntry& p = get_plan(g, FFTW_BACKWARD);
    for (std::size_t i = 0; i < g.size; ++i) {
        double s = origin_phase(g, i);
        p.in[i][0] = s * F.c[i].real();
        p.in[i][1] = s * F.c[i].imag();
    }
    fftw_execute(p.plan);
    double box = 1.0;
    for (int a = 0; a < g.d; ++a) box *= 2.0 * g.L;
    const double scale = 1.0 / box;
    std::vector<std::complex<double>> out(g.size);
    for (std::size_t i = 0; i < g.size; ++i)
        out[i] = std::complex<double>(scale * p.out[i][0], scale * p.out[i][1]);
    return out;
}

RealField inverse_transform(const SpectralField& F) {
    auto z = inverse_transform_complex(F);
    RealField f = make_real_field(F.grid);
    for (std::size_t i = 0; i < z.size(); ++i) f.v[i] = z[i].real();
    return f;
}

double inverse_imag_ratio(const SpectralField& F) {
    auto z = inverse_transform_complex(F);
    double mx = 0.0, mi = 0.0;
    for (const auto& w : z) {
        mx = std::max(mx, std::abs(w.real()));
        mi = std::max(mi, std::abs(w.imag()));
    }
    return mx > 0.0 ? mi / mx : mi;
}

}  // namespace hbo
