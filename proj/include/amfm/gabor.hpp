#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace amfm {

using Complex = std::complex<double>;

/// Center-frequency geometry of a filter: (u, v) in radians/sample, radial
/// frequency f = sqrt(u^2 + v^2) and orientation theta = atan2(v, u).
struct CenterFrequency {
    double u = 0, v = 0, f = 0, theta = 0;
};

inline CenterFrequency center_frequency(double l, double ang_deg) {
    if (!(l > 0.0)) throw std::invalid_argument("center_frequency: L must be positive");
    if (!(ang_deg >= 0.0 && ang_deg < 360.0))
        throw std::invalid_argument("center_frequency: Ang must be in [0, 360)");
    const double a = 2.0 * std::numbers::pi * ang_deg / 360.0;
    const double u = l * std::cos(a);
    const double v = l * std::sin(a);
    return {u, v, std::sqrt(u * u + v * v), std::atan2(v, u)};
}

/// Square complex tap grid over x, y in [-radius, radius].
class ComplexKernel {
public:
    explicit ComplexKernel(int radius)
        : radius_(radius), taps_(static_cast<std::size_t>(side()) * side()) {}

    int radius() const { return radius_; }
    int side() const { return 2 * radius_ + 1; }

    Complex& at(int x, int y) {
        return taps_[static_cast<std::size_t>(y + radius_) * side() + (x + radius_)];
    }
    Complex at(int x, int y) const {
        return taps_[static_cast<std::size_t>(y + radius_) * side() + (x + radius_)];
    }

    std::vector<Complex>& taps() { return taps_; }
    const std::vector<Complex>& taps() const { return taps_; }

private:
    int radius_;
    std::vector<Complex> taps_;
};

/// Discrete-time Fourier transform of the kernel at (u, v) rad/sample.
inline Complex kernel_dtft(const ComplexKernel& k, double u, double v) {
    Complex acc{};
    const int r = k.radius();
    for (int y = -r; y <= r; ++y)
        for (int x = -r; x <= r; ++x)
            acc += k.at(x, y) * std::polar(1.0, -(u * x + v * y));
    return acc;
}

/// Samples a complex Gabor kernel on the integer grid with truncation radius
/// ceil(3*sigma). f is the radial center frequency in radians/sample, theta
/// the orientation in radians; the carrier argument is f * x' where
/// x' = x cos(theta) + y sin(theta).
inline ComplexKernel gabor_kernel(double f, double theta, double sigma, double gamma) {
    if (!(sigma >= 1.0)) throw std::invalid_argument("gabor_kernel: sigma must be >= 1");
    if (!(gamma > 0.0)) throw std::invalid_argument("gabor_kernel: gamma must be positive");
    if (!(f > 0.0 && f <= std::numbers::pi * std::numbers::sqrt2))
        throw std::invalid_argument("gabor_kernel: f out of range");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    ComplexKernel k(radius);
    const double ct = std::cos(theta), st = std::sin(theta);
    const double amp = 1.0 / (2.0 * std::numbers::pi * gamma * sigma * sigma);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    for (int y = -radius; y <= radius; ++y) {
        for (int x = -radius; x <= radius; ++x) {
            const double xr = x * ct + y * st;
            const double yr = -x * st + y * ct;
            const double g = amp * std::exp(-((xr / gamma) * (xr / gamma) + yr * yr) * inv2s2);
            k.at(x, y) = Complex(g * std::cos(f * xr), g * std::sin(f * xr));
        }
    }
    return k;
}

/// One parameterized bank entry. The stored kernel is rescaled after sampling
/// so that |DTFT| at the center frequency equals 1, which keeps the dominant
/// IA comparison fair across kernel sizes.
struct GaborFilter {
    double l = 0;       // radial center distance, radians/sample
    double ang_deg = 0; // orientation angle, degrees
    double sigma = 0;   // Gaussian std-dev, samples
    double gamma = 0;   // aspect ratio
    double f = 0;       // radial center frequency = sqrt(u^2 + v^2)
    double theta = 0;   // orientation, radians
    double u = 0, v = 0;
    int scale_group = 0;
    ComplexKernel kernel{0};
};

inline GaborFilter make_filter(double l, double ang_deg, double sigma, double gamma,
                               int scale_group) {
    GaborFilter flt;
    flt.l = l;
    flt.ang_deg = ang_deg;
    flt.sigma = sigma;
    flt.gamma = gamma;
    const CenterFrequency cf = center_frequency(l, ang_deg);
    flt.u = cf.u;
    flt.v = cf.v;
    flt.f = cf.f;
    flt.theta = cf.theta;
    flt.scale_group = scale_group;
    flt.kernel = gabor_kernel(flt.f, flt.theta, sigma, gamma);
    const double peak = std::abs(kernel_dtft(flt.kernel, flt.u, flt.v));
    for (Complex& t : flt.kernel.taps()) t /= peak;
    return flt;
}

/// Magnitude of the filter's frequency response at (u_q, v_q) rad/sample.
inline double frequency_response(const GaborFilter& flt, double u_q, double v_q) {
    if (!(std::abs(u_q) <= std::numbers::pi && std::abs(v_q) <= std::numbers::pi))
        throw std::invalid_argument("frequency_response: query outside [-pi, pi]^2");
    return std::abs(kernel_dtft(flt.kernel, u_q, v_q));
}

/// The 54-filter daisy-petal bank. Immutable once built; filters are grouped
/// into four scale rows of sizes 24, 20, 8 and 2.
class Filterbank {
public:
    static constexpr double kGamma = 0.5;

    const std::vector<GaborFilter>& filters() const { return filters_; }
    std::size_t size() const { return filters_.size(); }
    const GaborFilter& operator[](std::size_t i) const { return filters_[i]; }

    int group_count() const {
        int g = 0;
        for (const auto& f : filters_) g = std::max(g, f.scale_group + 1);
        return g;
    }

    std::size_t group_size(int group) const {
        std::size_t n = 0;
        for (const auto& f : filters_)
            if (f.scale_group == group) ++n;
        return n;
    }

    int max_kernel_radius() const {
        int r = 0;
        for (const auto& f : filters_) r = std::max(r, f.kernel.radius());
        return r;
    }

    static Filterbank build();
    static Filterbank from_file(const std::string& path);

private:
    explicit Filterbank(std::vector<GaborFilter> filters) : filters_(std::move(filters)) {}

    static void check_unique(const std::vector<GaborFilter>& filters) {
        for (std::size_t i = 0; i < filters.size(); ++i)
            for (std::size_t j = i + 1; j < filters.size(); ++j)
                if (filters[i].l == filters[j].l && filters[i].ang_deg == filters[j].ang_deg)
                    throw std::invalid_argument("filterbank: duplicate (L, Ang) pair");
    }

    std::vector<GaborFilter> filters_;
};

inline Filterbank Filterbank::build() {
    const double pi = std::numbers::pi;
    std::vector<GaborFilter> filters;
    filters.reserve(54);

    struct RadialStop {
        double l_over_pi;
        double sigma;
    };

    // Six-scale row, angles every 45 degrees.
    const RadialStop row1[] = {{0.047, 11}, {0.125, 6}, {0.242, 4},
                               {0.406, 3},  {0.648, 2}, {0.938, 2}};
    const double ang1[] = {20.25, 65.25, 110.25, 155.25};
    for (const auto& rs : row1)
        for (double a : ang1) filters.push_back(make_filter(rs.l_over_pi * pi, a, rs.sigma, kGamma, 0));

    // Five-scale row, offset angles every 45 degrees.
    const RadialStop row2[] = {{0.102, 7}, {0.195, 6}, {0.313, 4}, {0.461, 3}, {0.695, 2}};
    const double ang2[] = {42.75, 87.75, 133.75, 177.75};
    for (const auto& rs : row2)
        for (double a : ang2) filters.push_back(make_filter(rs.l_over_pi * pi, a, rs.sigma, kGamma, 1));

    // Single low-frequency ring, angles every 22.5 degrees.
    for (int k = 0; k < 8; ++k)
        filters.push_back(make_filter(0.094 * pi, 10.0 + 22.5 * k, 3, kGamma, 2));

    // Two high-frequency corner filters.
    for (double a : {43.5, 133.5}) filters.push_back(make_filter(1.094 * pi, a, 2, kGamma, 3));

    check_unique(filters);
    return Filterbank(std::move(filters));
}

/// Plain-text override: one filter per line, fields
/// "L_over_pi Ang_deg sigma gamma scale_group", '#' starts a comment.
inline Filterbank Filterbank::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("filterbank: cannot open '" + path + "'");
    std::vector<GaborFilter> filters;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        double l_over_pi, ang, sigma, gamma;
        int group;
        if (!(ls >> l_over_pi)) continue; // blank line
        if (!(ls >> ang >> sigma >> gamma >> group))
            throw std::runtime_error("filterbank: malformed line " + std::to_string(lineno) +
                                     " in '" + path + "'");
        filters.push_back(make_filter(l_over_pi * std::numbers::pi, ang, sigma, gamma, group));
    }
    if (filters.empty()) throw std::runtime_error("filterbank: no filters in '" + path + "'");
    check_unique(filters);
    return Filterbank(std::move(filters));
}

} // namespace amfm
