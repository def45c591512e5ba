#include "hyplayer/spectral_radial.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace hyplayer {

namespace {

// FFTW's planner is not reentrant; execution on private arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(double* p) const { fftw_free(p); }
};

// In-place DST-I (FFTW_RODFT00) of length m: y_k = 2 sum_j x_j sin(pi (j+1)(k+1)/(m+1)).
void dst1(std::vector<double>& data) {
    const int m = static_cast<int>(data.size());
    std::unique_ptr<double, FftwFree> buf(static_cast<double*>(fftw_malloc(sizeof(double) * m)));
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_r2r_1d(m, buf.get(), buf.get(), FFTW_RODFT00, FFTW_ESTIMATE);
    }
    std::copy(data.begin(), data.end(), buf.get());
    fftw_execute(plan);
    std::copy(buf.get(), buf.get() + m, data.begin());
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

bool has_decayed(const RadialFn& w, double floor) {
    const int n = w.intervals();
    const int tail = std::max(1, n / 20);
    for (int j = n - tail; j <= n; ++j)
        if (std::abs(w.samples[j]) > floor) return false;
    return true;
}

}  // namespace

RadialFn RadialFn::sample(const std::function<double(double)>& fn, double L, int intervals) {
    if (!(L > 0.0) || intervals < 2)
        throw std::invalid_argument("RadialFn::sample: need L > 0 and at least 2 intervals");
    RadialFn out;
    out.L = L;
    out.samples.resize(intervals + 1);
    for (int j = 0; j <= intervals; ++j) out.samples[j] = fn(L * j / intervals);
    return out;
}

RadialFn frac_laplacian_radial_h3(const RadialFn& w, double gamma, double decay_floor) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::domain_error("frac_laplacian_radial_h3: gamma must lie in (0,1]");
    const int n = w.intervals();
    if (n < 2) throw std::invalid_argument("frac_laplacian_radial_h3: too few samples");
    const double h = w.step();

    std::vector<double> coef(n - 1);
    for (int j = 1; j < n; ++j) coef[j - 1] = std::sinh(j * h) * w.samples[j];
    dst1(coef);
    // inverse DST-I is the same transform scaled by 1/(2n); v_out(rho) = sum_k beta_k sin(k pi rho / L)
    double slope0 = 0.0;
    for (int k = 1; k < n; ++k) {
        double lambda = std::numbers::pi * k / w.L;
        coef[k - 1] *= std::pow(lambda * lambda + 1.0, gamma);
        slope0 += coef[k - 1] / n * lambda;
    }
    dst1(coef);

    RadialFn out;
    out.L = w.L;
    out.samples.assign(n + 1, 0.0);
    out.samples[0] = slope0;
    for (int j = 1; j < n; ++j) out.samples[j] = coef[j - 1] / (2.0 * n) / std::sinh(j * h);
    out.insufficient_decay = w.insufficient_decay || !has_decayed(w, decay_floor);
    return out;
}

RadialFn dtn_spectral_reference(const RadialFn& w, double gamma, double decay_floor) {
    return frac_laplacian_radial_h3(w, gamma, decay_floor);
}

double smooth_bump(double rho, double radius) {
    double s = rho / radius;
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

}  // namespace hyplayer
