#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "windowing.hpp"

namespace tsr {

enum class SpectralKind { FFT, DWT };

// How FFT features are emitted: interleaved (real, imag) pairs per kept bin
// (linear, invertible on the kept bins) or one magnitude per kept bin.
enum class FftMode { Pairs, Magnitude };

// Coefficient selection fixed at fit time: indices ordered by descending
// train-average magnitude (ties broken toward the lower index), so feature j
// means the same coefficient for every sample.
struct SpectralModel {
    SpectralKind kind = SpectralKind::FFT;
    std::vector<std::size_t> selected_indices;
    std::size_t k = 0;          // output feature width
    std::size_t input_len = 0;  // L
    FftMode mode = FftMode::Pairs;

    std::size_t padded_len() const;  // DWT working length (next power of two)
};

namespace baselines {

// Keeps the last k columns (most recent steps).
WindowMatrix truncate_last(const WindowMatrix& x, std::size_t k);

// Keeps the last index of each stride block: stride-1, 2*stride-1, ...
WindowMatrix downsample(const WindowMatrix& x, std::size_t stride);

SpectralModel fft_fit(const WindowMatrix& train, std::size_t k, FftMode mode = FftMode::Pairs);
Matrix fft_transform(const SpectralModel& model, const WindowMatrix& x);

// Reconstruction from the kept bins (zeros elsewhere); Pairs mode only.
WindowMatrix fft_inverse(const SpectralModel& model, const Matrix& features);

SpectralModel dwt_fit(const WindowMatrix& train, std::size_t k);
Matrix dwt_transform(const SpectralModel& model, const WindowMatrix& x);
WindowMatrix dwt_inverse(const SpectralModel& model, const Matrix& features);

void save_spectral(const SpectralModel& model, const std::string& path);
SpectralModel load_spectral(const std::string& path);

// In-place radix-2 complex FFT (power-of-two length). The inverse includes
// the 1/n scaling.
void fft_pow2(std::vector<double>& re, std::vector<double>& im, bool inverse);

// Direct DFT sum X[bin] for one real row; works for any length.
std::pair<double, double> dft_bin(const double* x, std::size_t len, std::size_t bin);

// Orthonormal full-depth Haar cascade of a padded window. Layout: [final
// approximation, coarsest detail, ..., finest details]. pad value repeats the
// last sample.
std::vector<double> haar_forward(const double* x, std::size_t len, std::size_t padded);
std::vector<double> haar_inverse(const std::vector<double>& coeffs);

// One analysis step: first half averages (x[2i]+x[2i+1])/sqrt(2), second half
// differences.
std::vector<double> haar_step(const std::vector<double>& x);

std::size_t next_pow2(std::size_t n);

}  // namespace baselines

}  // namespace tsr
