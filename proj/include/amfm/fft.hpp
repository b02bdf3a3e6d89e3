#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace amfm::fft {

using Complex = std::complex<double>;

inline bool is_five_smooth(std::size_t n) {
    if (n == 0) return false;
    for (std::size_t p : {std::size_t{2}, std::size_t{3}, std::size_t{5}})
        while (n % p == 0) n /= p;
    return n == 1;
}

/// Smallest 5-smooth integer >= n. Used to pick transform-friendly pad sizes.
inline std::size_t next_five_smooth(std::size_t n) {
    if (n == 0) return 1;
    while (!is_five_smooth(n)) ++n;
    return n;
}

/// Complex-to-complex 1-D transform of a fixed length. The plan is immutable
/// after construction and safe to share across threads; callers may pass a
/// scratch buffer of the same length to avoid per-call allocation.
///
/// Lengths whose prime factors are all <= kMaxRadix run through a recursive
/// mixed-radix decimation; anything else goes through Bluestein's algorithm on
/// top of a 5-smooth inner length.
class Plan {
public:
    static constexpr std::size_t kMaxRadix = 31;

    explicit Plan(std::size_t n) : n_(n) {
        if (n == 0) throw std::invalid_argument("fft: zero-length transform");
        if (smooth_enough(n)) {
            twiddle_.resize(n);
            const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
            for (std::size_t j = 0; j < n; ++j)
                twiddle_[j] = std::polar(1.0, step * static_cast<double>(j));
        } else {
            blue_ = std::make_unique<Bluestein>(n);
        }
    }

    std::size_t size() const { return n_; }

    /// In-place forward DFT (no normalization).
    void forward(Complex* data, Complex* scratch = nullptr) const {
        if (n_ == 1) return;
        if (blue_) {
            blue_->run(data);
            return;
        }
        std::vector<Complex> local;
        if (!scratch) {
            local.assign(data, data + n_);
        } else {
            std::copy(data, data + n_, scratch);
        }
        recurse(scratch ? scratch : local.data(), 1, n_, data);
    }

    /// In-place inverse DFT with 1/n scaling.
    void inverse(Complex* data, Complex* scratch = nullptr) const {
        for (std::size_t j = 0; j < n_; ++j) data[j] = std::conj(data[j]);
        forward(data, scratch);
        const double inv = 1.0 / static_cast<double>(n_);
        for (std::size_t j = 0; j < n_; ++j) data[j] = std::conj(data[j]) * inv;
    }

private:
    static bool smooth_enough(std::size_t n) {
        for (std::size_t p = 2; p <= kMaxRadix; ++p)
            while (n % p == 0) n /= p;
        return n == 1;
    }

    static std::size_t smallest_factor(std::size_t n) {
        if (n % 4 == 0) return 4; // fused two radix-2 levels
        for (std::size_t p = 2; p * p <= n; ++p)
            if (n % p == 0) return p;
        return n;
    }

    // Decimation-in-time step: reads `in` at the given stride, writes the DFT
    // contiguously into `out`. The invariant stride * n == n_ lets every level
    // index one shared twiddle table.
    void recurse(const Complex* in, std::size_t stride, std::size_t n, Complex* out) const {
        if (n == 1) {
            out[0] = in[0];
            return;
        }
        const std::size_t r = smallest_factor(n);
        const std::size_t m = n / r;
        for (std::size_t q = 0; q < r; ++q)
            recurse(in + q * stride, stride * r, m, out + q * m);

        Complex t[kMaxRadix];
        for (std::size_t k = 0; k < m; ++k) {
            t[0] = out[k];
            for (std::size_t q = 1; q < r; ++q)
                t[q] = out[q * m + k] * twiddle_[q * k * stride];
            butterfly(t, r, out, k, m, stride);
        }
    }

    void butterfly(const Complex* t, std::size_t r, Complex* out, std::size_t k, std::size_t m,
                   std::size_t stride) const {
        switch (r) {
            case 2: {
                out[k] = t[0] + t[1];
                out[k + m] = t[0] - t[1];
                return;
            }
            case 3: {
                // w = exp(-2*pi*i/3)
                constexpr double wr = -0.5;
                constexpr double wi = -0.8660254037844386467637232;
                const Complex s = t[1] + t[2];
                const Complex d = t[1] - t[2];
                out[k] = t[0] + s;
                const Complex a = t[0] + wr * s;
                const Complex b = Complex(-wi * d.imag(), wi * d.real());
                out[k + m] = a + b;
                out[k + 2 * m] = a - b;
                return;
            }
            case 4: {
                const Complex a = t[0] + t[2];
                const Complex b = t[0] - t[2];
                const Complex c = t[1] + t[3];
                const Complex d = t[1] - t[3];
                const Complex id = Complex(-d.imag(), d.real()); // i * d
                out[k] = a + c;
                out[k + m] = b - id;
                out[k + 2 * m] = a - c;
                out[k + 3 * m] = b + id;
                return;
            }
            case 5: {
                // Classic 5-point kernel built on cos/sin of 2*pi/5 and 4*pi/5.
                constexpr double c1 = 0.30901699437494742410; // cos(2pi/5)
                constexpr double c2 = -0.80901699437494742410; // cos(4pi/5)
                constexpr double s1 = 0.95105651629515357212; // sin(2pi/5)
                constexpr double s2 = 0.58778525229247312917; // sin(4pi/5)
                const Complex p14 = t[1] + t[4], m14 = t[1] - t[4];
                const Complex p23 = t[2] + t[3], m23 = t[2] - t[3];
                out[k] = t[0] + p14 + p23;
                const Complex a1 = t[0] + c1 * p14 + c2 * p23;
                const Complex a2 = t[0] + c2 * p14 + c1 * p23;
                const Complex b1 = Complex(s1 * m14.imag() + s2 * m23.imag(),
                                           -s1 * m14.real() - s2 * m23.real());
                const Complex b2 = Complex(s2 * m14.imag() - s1 * m23.imag(),
                                           -s2 * m14.real() + s1 * m23.real());
                out[k + m] = a1 + b1;
                out[k + 2 * m] = a2 + b2;
                out[k + 3 * m] = a2 - b2;
                out[k + 4 * m] = a1 - b1;
                return;
            }
            default: {
                // Generic prime radix.
                for (std::size_t c = 0; c < r; ++c) {
                    Complex acc = t[0];
                    for (std::size_t q = 1; q < r; ++q)
                        acc += t[q] * twiddle_[((q * c) % r) * m * stride];
                    out[k + c * m] = acc;
                }
                return;
            }
        }
    }

    struct Bluestein {
        explicit Bluestein(std::size_t n) : n(n), m(next_five_smooth(2 * n - 1)) {
            inner = std::make_unique<Plan>(m);
            chirp.resize(n);
            const std::size_t period = 2 * n;
            for (std::size_t t = 0; t < n; ++t) {
                const std::size_t sq = (t * t) % period;
                chirp[t] = std::polar(1.0, -std::numbers::pi * static_cast<double>(sq) /
                                               static_cast<double>(n));
            }
            std::vector<Complex> b(m, Complex{});
            b[0] = std::conj(chirp[0]);
            for (std::size_t t = 1; t < n; ++t) {
                b[t] = std::conj(chirp[t]);
                b[m - t] = std::conj(chirp[t]);
            }
            inner->forward(b.data());
            chirp_fft = std::move(b);
        }

        void run(Complex* data) const {
            std::vector<Complex> a(m, Complex{});
            for (std::size_t t = 0; t < n; ++t) a[t] = data[t] * chirp[t];
            inner->forward(a.data());
            for (std::size_t t = 0; t < m; ++t) a[t] *= chirp_fft[t];
            inner->inverse(a.data());
            for (std::size_t t = 0; t < n; ++t) data[t] = a[t] * chirp[t];
        }

        std::size_t n, m;
        std::unique_ptr<Plan> inner;
        std::vector<Complex> chirp;
        std::vector<Complex> chirp_fft;
    };

    std::size_t n_;
    std::vector<Complex> twiddle_;
    std::unique_ptr<Bluestein> blue_;
};

/// Blocked out-of-place transpose: src is w x h row-major, dst becomes h x w.
inline void transpose(const Complex* src, std::size_t w, std::size_t h, Complex* dst) {
    constexpr std::size_t B = 32;
    for (std::size_t y0 = 0; y0 < h; y0 += B) {
        const std::size_t y1 = std::min(y0 + B, h);
        for (std::size_t x0 = 0; x0 < w; x0 += B) {
            const std::size_t x1 = std::min(x0 + B, w);
            for (std::size_t y = y0; y < y1; ++y)
                for (std::size_t x = x0; x < x1; ++x)
                    dst[x * h + y] = src[y * w + x];
        }
    }
}

/// 2-D complex transform over a w x h row-major buffer. Rows are transformed
/// in place, columns via transpose / row pass / transpose.
class Plan2d {
public:
    Plan2d(std::size_t w, std::size_t h) : w_(w), h_(h), row_(w), col_(h) {}

    std::size_t width() const { return w_; }
    std::size_t height() const { return h_; }

    /// scratch must hold at least w*h elements.
    void forward(Complex* data, Complex* scratch) const {
        run(data, scratch, /*inverse=*/false);
    }

    void inverse(Complex* data, Complex* scratch) const {
        run(data, scratch, /*inverse=*/true);
    }

private:
    void run(Complex* data, Complex* scratch, bool inverse) const {
        for (std::size_t y = 0; y < h_; ++y) {
            Complex* row = data + y * w_;
            if (inverse)
                row_.inverse(row, scratch);
            else
                row_.forward(row, scratch);
        }
        transpose(data, w_, h_, scratch);
        for (std::size_t x = 0; x < w_; ++x) {
            Complex* col = scratch + x * h_;
            if (inverse)
                col_.inverse(col, data);
            else
                col_.forward(col, data);
        }
        transpose(scratch, h_, w_, data);
    }

    std::size_t w_, h_;
    Plan row_, col_;
};

} // namespace amfm::fft
