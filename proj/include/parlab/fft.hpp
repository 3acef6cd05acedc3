#pragma once

#include <complex>
#include <vector>

namespace parlab::fft {

using cvec = std::vector<std::complex<double>>;

// In-place iterative radix-2 Cooley–Tukey transform. Size must be a power of
// two. The inverse transform includes the 1/N normalization.
void transform(cvec& a, bool inverse);

cvec forward_real(const std::vector<double>& a);
std::vector<double> inverse_to_real(cvec a);

// 2-D transform of an N×N row-major array (N power of two).
void transform_2d(cvec& a, int n, bool inverse);
cvec forward_real_2d(const std::vector<double>& a, int n);
std::vector<double> inverse_to_real_2d(cvec a, int n);

}  // namespace parlab::fft
