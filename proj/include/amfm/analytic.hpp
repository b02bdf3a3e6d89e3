#pragma once

#include <vector>

#include "amfm/fft.hpp"
#include "amfm/image.hpp"

namespace amfm {

/// Complex image whose real part is the source grayscale image, bit for bit,
/// and whose imaginary part is its partial Hilbert transform along x.
class AnalyticImage {
public:
    AnalyticImage(int width, int height)
        : w_(width),
          h_(height),
          re_(static_cast<std::size_t>(width) * height),
          im_(static_cast<std::size_t>(width) * height) {
        detail::require_dims(width, height);
    }

    int width() const { return w_; }
    int height() const { return h_; }

    double& re(int x, int y) { return re_[static_cast<std::size_t>(y) * w_ + x]; }
    double re(int x, int y) const { return re_[static_cast<std::size_t>(y) * w_ + x]; }
    double& im(int x, int y) { return im_[static_cast<std::size_t>(y) * w_ + x]; }
    double im(int x, int y) const { return im_[static_cast<std::size_t>(y) * w_ + x]; }

    std::vector<double>& real() { return re_; }
    const std::vector<double>& real() const { return re_; }
    std::vector<double>& imag() { return im_; }
    const std::vector<double>& imag() const { return im_; }

private:
    int w_, h_;
    std::vector<double> re_, im_;
};

/// Extended analytic image: imaginary part is the x-directed Hilbert
/// transform, realized in the DFT domain by the per-column multiplier
/// -j*sign(u), with sign fixed at 0 on the DC column and (for even widths)
/// the Nyquist column. The real part is an exact copy of the input.
inline AnalyticImage analytic_image(const GrayImage& img) {
    const int w = img.width(), h = img.height();
    if (w < 8 || h < 8)
        throw std::invalid_argument("analytic_image: image must be at least 8x8");

    AnalyticImage out(w, h);
    out.real() = img.pixels();

    const fft::Plan plan(static_cast<std::size_t>(w));
    std::vector<fft::Complex> row(w), scratch(w);

    // sign(u) over DFT bins: +1 on the low half, -1 on the high half.
    std::vector<double> sign(w, 0.0);
    for (int u = 1; u < (w + 1) / 2; ++u) sign[u] = 1.0;
    for (int u = w / 2 + 1; u < w; ++u) sign[u] = -1.0;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) row[x] = fft::Complex(img.at(x, y), 0.0);
        plan.forward(row.data(), scratch.data());
        for (int u = 0; u < w; ++u) row[u] *= fft::Complex(0.0, -sign[u]);
        plan.inverse(row.data(), scratch.data());
        for (int x = 0; x < w; ++x) out.im(x, y) = row[x].real();
    }
    return out;
}

} // namespace amfm
