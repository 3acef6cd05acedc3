#include "parlab/fft.hpp"

#include <numbers>
#include <stdexcept>

namespace parlab::fft {

namespace {

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

void transform(cvec& a, bool inverse) {
    const size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");
    if (n == 1) return;

    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / double(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / double(n);
        for (auto& z : a) z *= inv;
    }
}

cvec forward_real(const std::vector<double>& a) {
    cvec out(a.begin(), a.end());
    transform(out, false);
    return out;
}

std::vector<double> inverse_to_real(cvec a) {
    transform(a, true);
    std::vector<double> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i].real();
    return out;
}

void transform_2d(cvec& a, int n, bool inverse) {
    if (a.size() != size_t(n) * size_t(n))
        throw std::invalid_argument("fft: 2-D size mismatch");
    cvec row(n);
    for (int r = 0; r < n; ++r) {
        std::copy(a.begin() + size_t(r) * n, a.begin() + size_t(r + 1) * n, row.begin());
        transform(row, inverse);
        std::copy(row.begin(), row.end(), a.begin() + size_t(r) * n);
    }
    cvec col(n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) col[r] = a[size_t(r) * n + c];
        transform(col, inverse);
        for (int r = 0; r < n; ++r) a[size_t(r) * n + c] = col[r];
    }
}

cvec forward_real_2d(const std::vector<double>& a, int n) {
    cvec out(a.begin(), a.end());
    transform_2d(out, n, false);
    return out;
}

std::vector<double> inverse_to_real_2d(cvec a, int n) {
    transform_2d(a, n, true);
    std::vector<double> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i].real();
    return out;
}

}  // namespace parlab::fft
