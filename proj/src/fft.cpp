#include "fft.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "frns/specfun.hpp"

namespace frns {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes))
    {
        if (!ptr)
            throw NumericalError("fftw_malloc failed");
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    void* ptr;
};

} // namespace

RealFFT::RealFFT(const Grid& grid)
{
    const int n = static_cast<int>(grid.points_per_dim());
    real_size_ = grid.total_points();
    half_ = static_cast<std::size_t>(n / 2 + 1);
    spectrum_size_ = grid.n_dim() == 1 ? half_ : static_cast<std::size_t>(n) * half_;

    FftwBuffer r(sizeof(double) * real_size_);
    FftwBuffer c(sizeof(fftw_complex) * spectrum_size_);
    auto* rp = static_cast<double*>(r.ptr);
    auto* cp = static_cast<fftw_complex*>(c.ptr);

    std::lock_guard<std::mutex> lock(planner_mutex());
    if (grid.n_dim() == 1) {
        plan_r2c_ = fftw_plan_dft_r2c_1d(n, rp, cp, FFTW_ESTIMATE);
        plan_c2r_ = fftw_plan_dft_c2r_1d(n, cp, rp, FFTW_ESTIMATE);
    } else {
        plan_r2c_ = fftw_plan_dft_r2c_2d(n, n, rp, cp, FFTW_ESTIMATE);
        plan_c2r_ = fftw_plan_dft_c2r_2d(n, n, cp, rp, FFTW_ESTIMATE);
    }
    if (!plan_r2c_ || !plan_c2r_)
        throw NumericalError("FFTW plan creation failed");
}

RealFFT::~RealFFT()
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_r2c_)
        fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
    if (plan_c2r_)
        fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
}

void RealFFT::forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) const
{
    if (in.size() != real_size_)
        throw ParameterError("RealFFT::forward: size mismatch");
    FftwBuffer r(sizeof(double) * real_size_);
    FftwBuffer c(sizeof(fftw_complex) * spectrum_size_);
    std::memcpy(r.ptr, in.data(), sizeof(double) * real_size_);
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), static_cast<double*>(r.ptr),
                         static_cast<fftw_complex*>(c.ptr));
    out.resize(spectrum_size_);
    std::memcpy(out.data(), c.ptr, sizeof(fftw_complex) * spectrum_size_);
}

void RealFFT::inverse(const std::vector<std::complex<double>>& in, std::vector<double>& out) const
{
    if (in.size() != spectrum_size_)
        throw ParameterError("RealFFT::inverse: size mismatch");
    FftwBuffer r(sizeof(double) * real_size_);
    FftwBuffer c(sizeof(fftw_complex) * spectrum_size_);
    // c2r destroys its input, so always work on a copy.
    std::memcpy(c.ptr, in.data(), sizeof(fftw_complex) * spectrum_size_);
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_), static_cast<fftw_complex*>(c.ptr),
                         static_cast<double*>(r.ptr));
    out.resize(real_size_);
    const double scale = 1.0 / static_cast<double>(real_size_);
    const auto* rp = static_cast<const double*>(r.ptr);
    std::transform(rp, rp + real_size_, out.begin(), [scale](double v) { return v * scale; });
}

} // namespace frns
