#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "amfm/analytic.hpp"
#include "amfm/fft.hpp"
#include "amfm/gabor.hpp"
#include "amfm/image.hpp"
#include "amfm/parallel.hpp"

namespace amfm {

/// Per-channel demodulation output: instantaneous amplitude (>= 0 everywhere)
/// and instantaneous phase wrapped to (-pi, pi].
struct ChannelField {
    int width = 0, height = 0;
    std::vector<double> ia;
    std::vector<double> ip;
    int channel_index = 0;
    int scale_group = 0;
};

/// Dominant-component field: per pixel, the IA/IP of the channel with the
/// largest IA among the selected set, plus the winning channel index.
struct AmFmField {
    int width = 0, height = 0;
    std::vector<double> dominant_ia;
    std::vector<double> dominant_ip;
    std::vector<std::int32_t> dominant_channel;
    int n_channels = 0;
};

/// Channel subset for dominant component analysis: the whole bank or one
/// scale group.
class Selection {
public:
    static Selection all() { return Selection{std::nullopt}; }
    static Selection scale_group(int g) { return Selection{g}; }

    bool admits(int group) const { return !group_ || *group_ == group; }
    bool is_all() const { return !group_.has_value(); }
    int group() const { return group_.value(); }

private:
    explicit Selection(std::optional<int> g) : group_(g) {}
    std::optional<int> group_;
};

namespace detail {

inline double wrap_phase(double im, double re) {
    double p = std::atan2(im, re); // atan2(0, 0) == 0
    if (p == -std::numbers::pi) p = std::numbers::pi;
    return p;
}

inline double magnitude(const fft::Complex& z) {
    return std::sqrt(z.real() * z.real() + z.imag() * z.imag());
}

// Mirror index into [0, n): half-sample symmetric extension (edge duplicated).
inline int mirror_index(int i, int n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
    return i;
}

/// Spectrum of the symmetrically padded analytic image, stored in transposed
/// layout (nx rows of length ny) so the per-channel pipeline can run all its
/// passes over contiguous rows. Pad radius r on every side; sizes round up to
/// transform-friendly lengths, and the slack beyond the mirrored ring is zero,
/// which cannot reach interior outputs for kernels of radius <= r.
struct PaddedSpectrum {
    std::size_t nx = 0, ny = 0;
    int radius = 0;
    std::vector<fft::Complex> freq_t;
};

struct DemodPlans {
    explicit DemodPlans(const PaddedSpectrum& spec) : px(spec.nx), py(spec.ny) {}
    fft::Plan px; // row length nx
    fft::Plan py; // column length ny
};

/// Per-worker scratch for the channel pipeline; reused across channels.
struct DemodWorkspace {
    std::vector<fft::Complex> plane;  // nx*ny, normal layout
    std::vector<fft::Complex> tplane; // nx*ny, transposed layout
    std::vector<fft::Complex> line;   // max(nx, ny) 1-D scratch

    void resize(const PaddedSpectrum& spec) {
        plane.resize(spec.nx * spec.ny);
        tplane.resize(spec.nx * spec.ny);
        line.resize(std::max(spec.nx, spec.ny));
    }
};

inline PaddedSpectrum padded_spectrum(const AnalyticImage& asig, int radius) {
    const int w = asig.width(), h = asig.height();
    PaddedSpectrum out;
    out.radius = radius;
    out.nx = fft::next_five_smooth(static_cast<std::size_t>(w + 2 * radius));
    out.ny = fft::next_five_smooth(static_cast<std::size_t>(h + 2 * radius));

    std::vector<fft::Complex> pad(out.nx * out.ny, fft::Complex{});
    for (int y = -radius; y < h + radius; ++y) {
        const int sy = mirror_index(y, h);
        fft::Complex* row = pad.data() + static_cast<std::size_t>(y + radius) * out.nx;
        for (int x = -radius; x < w + radius; ++x) {
            const int sx = mirror_index(x, w);
            row[x + radius] = fft::Complex(asig.re(sx, sy), asig.im(sx, sy));
        }
    }

    const fft::Plan px(out.nx), py(out.ny);
    std::vector<fft::Complex> line(std::max(out.nx, out.ny));
    for (std::size_t y = 0; y < out.ny; ++y)
        px.forward(pad.data() + y * out.nx, line.data());
    out.freq_t.resize(out.nx * out.ny);
    fft::transpose(pad.data(), out.nx, out.ny, out.freq_t.data());
    for (std::size_t x = 0; x < out.nx; ++x)
        py.forward(out.freq_t.data() + x * out.ny, line.data());
    return out;
}

struct ChannelComplex {
    int width = 0, height = 0;
    std::vector<fft::Complex> values;
};

/// Convolves the padded analytic image with the filter kernel in the
/// frequency domain and crops back the original extent.
inline ChannelComplex demodulate_complex(const AnalyticImage& asig, const GaborFilter& filter,
                                         const PaddedSpectrum& spec, const DemodPlans& plans,
                                         DemodWorkspace& ws) {
    const int w = asig.width(), h = asig.height();
    const int r = filter.kernel.radius();
    if (filter.kernel.side() > w || filter.kernel.side() > h)
        throw std::invalid_argument("demodulate: image smaller than filter kernel");
    if (r > spec.radius)
        throw std::invalid_argument("demodulate: pad radius smaller than kernel radius");

    const std::size_t nx = spec.nx, ny = spec.ny;
    ws.resize(spec);
    fft::Complex* plane = ws.plane.data();
    fft::Complex* tplane = ws.tplane.data();
    fft::Complex* line = ws.line.data();

    // Kernel placed with wrap-around so its origin sits at index (0, 0).
    std::fill(ws.plane.begin(), ws.plane.end(), fft::Complex{});
    for (int y = -r; y <= r; ++y) {
        const std::size_t wy = static_cast<std::size_t>(y < 0 ? y + static_cast<int>(ny) : y);
        for (int x = -r; x <= r; ++x) {
            const std::size_t wx = static_cast<std::size_t>(x < 0 ? x + static_cast<int>(nx) : x);
            plane[wy * nx + wx] = filter.kernel.at(x, y);
        }
    }

    // Forward transform; only the 2r+1 wrapped kernel rows are nonzero.
    for (int y = 0; y <= r; ++y) plans.px.forward(plane + static_cast<std::size_t>(y) * nx, line);
    for (int y = static_cast<int>(ny) - r; y < static_cast<int>(ny); ++y)
        plans.px.forward(plane + static_cast<std::size_t>(y) * nx, line);
    fft::transpose(plane, nx, ny, tplane);
    const fft::Complex* sfreq = spec.freq_t.data();
    for (std::size_t x = 0; x < nx; ++x) {
        fft::Complex* col = tplane + x * ny;
        plans.py.forward(col, line);
        const fft::Complex* s = sfreq + x * ny;
        for (std::size_t k = 0; k < ny; ++k) col[k] *= s[k];
    }

    // Inverse: columns first (rows of the transposed buffer), then only the
    // spatial rows that survive the crop.
    for (std::size_t x = 0; x < nx; ++x) plans.py.inverse(tplane + x * ny, line);
    fft::transpose(tplane, ny, nx, plane);

    ChannelComplex out;
    out.width = w;
    out.height = h;
    out.values.resize(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        fft::Complex* row = plane + static_cast<std::size_t>(y + spec.radius) * nx;
        plans.px.inverse(row, line);
        std::copy(row + spec.radius, row + spec.radius + w,
                  out.values.data() + static_cast<std::size_t>(y) * w);
    }
    return out;
}

} // namespace detail

/// Demodulates one channel: frequency-domain convolution of the analytic
/// image with the filter kernel under symmetric boundary extension, then
/// IA = |.| and IP = atan2 per pixel. pad_radius defaults to the kernel's own
/// radius; pass a shared radius to reproduce the batched path bit for bit.
inline ChannelField demodulate_channel(const AnalyticImage& asig, const GaborFilter& filter,
                                       int channel_index = 0, int pad_radius = -1) {
    const int radius = pad_radius >= 0 ? pad_radius : filter.kernel.radius();
    const detail::PaddedSpectrum spec = detail::padded_spectrum(asig, radius);
    const detail::DemodPlans plans(spec);
    detail::DemodWorkspace ws;
    const detail::ChannelComplex cc = detail::demodulate_complex(asig, filter, spec, plans, ws);

    ChannelField out;
    out.width = cc.width;
    out.height = cc.height;
    out.channel_index = channel_index;
    out.scale_group = filter.scale_group;
    out.ia.resize(cc.values.size());
    out.ip.resize(cc.values.size());
    for (std::size_t i = 0; i < cc.values.size(); ++i) {
        out.ia[i] = detail::magnitude(cc.values[i]);
        out.ip[i] = detail::wrap_phase(cc.values[i].imag(), cc.values[i].real());
    }
    return out;
}

/// Per-pixel dominant component analysis over the given channels. Ties in IA
/// go to the smaller channel_index, so the result is independent of list
/// order and of scheduling.
inline AmFmField dominant_components(const std::vector<ChannelField>& channels,
                                     Selection selection = Selection::all()) {
    if (channels.empty()) throw std::invalid_argument("dominant_components: empty channel list");
    const int w = channels.front().width, h = channels.front().height;
    for (const auto& c : channels)
        if (c.width != w || c.height != h)
            throw std::invalid_argument("dominant_components: dimension mismatch");

    AmFmField out;
    out.width = w;
    out.height = h;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    out.dominant_ia.assign(n, 0.0);
    out.dominant_ip.assign(n, 0.0);
    out.dominant_channel.assign(n, -1);

    int admitted = 0;
    for (const auto& c : channels) {
        if (!selection.admits(c.scale_group)) continue;
        ++admitted;
        for (std::size_t i = 0; i < n; ++i) {
            const std::int32_t cur = out.dominant_channel[i];
            if (cur < 0 || c.ia[i] > out.dominant_ia[i] ||
                (c.ia[i] == out.dominant_ia[i] && c.channel_index < cur)) {
                out.dominant_ia[i] = c.ia[i];
                out.dominant_ip[i] = c.ip[i];
                out.dominant_channel[i] = c.channel_index;
            }
        }
    }
    if (admitted == 0)
        throw std::invalid_argument("dominant_components: selection admits no channel");
    out.n_channels = admitted;
    return out;
}

/// Fused whole-bank demodulation + DCA. Channels run in parallel; the merge
/// compares (ia, channel index) pairs, which is associative and commutative,
/// so the result is identical for any thread count. Produces exactly the same
/// field as composing demodulate_channel (with the shared pad radius) and
/// dominant_components.
inline AmFmField demodulate_frame(const AnalyticImage& asig, const Filterbank& bank,
                                  Selection selection = Selection::all(), int threads = 0) {
    const int w = asig.width(), h = asig.height();
    std::vector<int> admitted;
    for (std::size_t i = 0; i < bank.size(); ++i)
        if (selection.admits(bank[i].scale_group)) admitted.push_back(static_cast<int>(i));
    if (admitted.empty())
        throw std::invalid_argument("demodulate_frame: selection admits no channel");

    int pad = 0;
    for (int idx : admitted) pad = std::max(pad, bank[idx].kernel.radius());
    const detail::PaddedSpectrum spec = detail::padded_spectrum(asig, pad);
    const detail::DemodPlans plans(spec);

    const std::size_t n = static_cast<std::size_t>(w) * h;
    struct Accum {
        std::vector<double> ia;
        std::vector<double> re, im;
        std::vector<std::int32_t> idx;
        detail::DemodWorkspace ws;
    };

    const int nthreads =
        std::max(1, std::min(resolve_threads(threads), static_cast<int>(admitted.size())));
    std::vector<Accum> acc(static_cast<std::size_t>(nthreads));

    parallel_for_workers(static_cast<int>(admitted.size()), nthreads, [&](int worker, int item) {
        const int fidx = admitted[static_cast<std::size_t>(item)];
        Accum& a = acc[static_cast<std::size_t>(worker)];
        const detail::ChannelComplex cc =
            detail::demodulate_complex(asig, bank[fidx], spec, plans, a.ws);
        if (a.ia.empty()) {
            a.ia.assign(n, 0.0);
            a.re.assign(n, 0.0);
            a.im.assign(n, 0.0);
            a.idx.assign(n, -1);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double ia = detail::magnitude(cc.values[i]);
            if (a.idx[i] < 0 || ia > a.ia[i] || (ia == a.ia[i] && fidx < a.idx[i])) {
                a.ia[i] = ia;
                a.re[i] = cc.values[i].real();
                a.im[i] = cc.values[i].imag();
                a.idx[i] = fidx;
            }
        }
    });

    AmFmField out;
    out.width = w;
    out.height = h;
    out.n_channels = static_cast<int>(admitted.size());
    out.dominant_ia.assign(n, 0.0);
    out.dominant_ip.assign(n, 0.0);
    out.dominant_channel.assign(n, -1);
    std::vector<double> best_re(n, 0.0), best_im(n, 0.0);
    for (const Accum& a : acc) {
        if (a.ia.empty()) continue;
        for (std::size_t i = 0; i < n; ++i) {
            if (a.idx[i] < 0) continue;
            const std::int32_t cur = out.dominant_channel[i];
            if (cur < 0 || a.ia[i] > out.dominant_ia[i] ||
                (a.ia[i] == out.dominant_ia[i] && a.idx[i] < cur)) {
                out.dominant_ia[i] = a.ia[i];
                best_re[i] = a.re[i];
                best_im[i] = a.im[i];
                out.dominant_channel[i] = a.idx[i];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        out.dominant_ip[i] = detail::wrap_phase(best_im[i], best_re[i]);
    return out;
}

/// FM display image: cos of the dominant phase mapped from [-1, 1] to
/// [0, 255].
inline GrayImage fm_image(const AmFmField& field) {
    GrayImage out(field.width, field.height);
    for (std::size_t i = 0; i < out.pixels().size(); ++i)
        out.pixels()[i] = (std::cos(field.dominant_ip[i]) + 1.0) * 0.5 * 255.0;
    return out;
}

/// AM display image: dominant IA rescaled so min -> 0 and max -> 255; a
/// constant field (up to round-off) maps to all zeros.
inline GrayImage am_image(const AmFmField& field) {
    GrayImage out(field.width, field.height);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : field.dominant_ia) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo) || hi - lo <= 1e-9 * std::max({std::abs(lo), std::abs(hi), 1.0})) return out;
    const double scale = 255.0 / (hi - lo);
    for (std::size_t i = 0; i < out.pixels().size(); ++i)
        out.pixels()[i] = (field.dominant_ia[i] - lo) * scale;
    return out;
}

} // namespace amfm
