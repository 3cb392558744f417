#pragma once

// FFTW plumbing shared by the spectral kernels. Plans are created once per size
// under a lock (the FFTW planner is not thread-safe) with FFTW_ESTIMATE so the
// chosen algorithm, and therefore every rounding, is the same on every run.
// Execution uses the new-array interface on caller-owned buffers, so concurrent
// workers never share scratch memory.

#include <complex>
#include <span>
#include <vector>

namespace bolab::detail {

using complex = std::complex<double>;

/// Smallest power of two >= n (and >= 4).
int fft_size_at_least(int n);

/// Grid size that computes the modes |n| <= band_out of a product of two
/// trigonometric polynomials with bandwidths band_a, band_b without aliasing.
int product_grid(int band_a, int band_b, int band_out);

/// values[j] = sum_k coeffs[k] e^{+2 pi i j k / M}   (length M, in place)
void to_values(std::span<complex> buffer);
/// coeffs[k] = (1/M) sum_j values[j] e^{-2 pi i j k / M} (length M, in place)
void to_coefficients(std::span<complex> buffer);

/// Half-spectrum (modes 0..M/2) to M real samples. `half` is clobbered.
void half_to_values(std::span<complex> half, std::span<double> values);
/// M real samples to half-spectrum (modes 0..M/2), scaled by 1/M.
void values_to_half(std::span<double> values, std::span<complex> half);

/// Per-thread scratch; one instance per worker, never shared.
struct RealProductScratch {
  std::vector<complex> half_a, half_b, half_out;
  std::vector<double> va, vb;
  void resize(int M);
};

/// out[n] (n = 0..band_out) of the product of two real functions given by
/// positive-mode arrays a[0..band_a], b[0..band_b].
void real_product(std::span<const complex> a, int band_a, std::span<const complex> b, int band_b,
                  std::span<complex> out, int band_out, RealProductScratch& scratch);

}  // namespace bolab::detail
