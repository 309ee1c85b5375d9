#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "frns/grid.hpp"

namespace frns {

// Real-to-complex transform on a Grid, backed by FFTW. Plans are created once
// with FFTW_ESTIMATE (deterministic) and executed through the new-array
// interface, so one instance may be shared by concurrent callers.
class RealFFT {
public:
    explicit RealFFT(const Grid& grid);
    ~RealFFT();
    RealFFT(const RealFFT&) = delete;
    RealFFT& operator=(const RealFFT&) = delete;

    std::size_t real_size() const { return real_size_; }
    std::size_t spectrum_size() const { return spectrum_size_; }
    // Number of points along the halved (last) axis.
    std::size_t half_axis() const { return half_; }

    // Unnormalized forward transform.
    void forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) const;
    // Inverse transform including the 1/total_points normalization.
    void inverse(const std::vector<std::complex<double>>& in, std::vector<double>& out) const;

private:
    std::size_t real_size_ = 0;
    std::size_t spectrum_size_ = 0;
    std::size_t half_ = 0;
    void* plan_r2c_ = nullptr;
    void* plan_c2r_ = nullptr;
};

} // namespace frns
