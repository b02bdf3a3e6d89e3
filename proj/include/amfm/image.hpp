#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace amfm {

struct Rgb8 {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

namespace detail {

inline void require_dims(int width, int height) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("image dimensions must be positive, got " +
                                    std::to_string(width) + "x" + std::to_string(height));
    }
}

} // namespace detail

/// 8-bit RGB raster, row-major, origin at the top-left corner.
/// x indexes columns (width), y indexes rows (height).
class RgbImage {
public:
    RgbImage(int width, int height, Rgb8 fill = {})
        : w_(width), h_(height), px_(static_cast<std::size_t>(width) * height, fill) {
        detail::require_dims(width, height);
    }

    int width() const { return w_; }
    int height() const { return h_; }

    Rgb8& at(int x, int y) {
        assert(x >= 0 && x < w_ && y >= 0 && y < h_);
        return px_[static_cast<std::size_t>(y) * w_ + x];
    }
    const Rgb8& at(int x, int y) const {
        assert(x >= 0 && x < w_ && y >= 0 && y < h_);
        return px_[static_cast<std::size_t>(y) * w_ + x];
    }

    std::vector<Rgb8>& pixels() { return px_; }
    const std::vector<Rgb8>& pixels() const { return px_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    int w_, h_;
    std::vector<Rgb8> px_;
};

/// Real-valued single-channel raster. Intermediate planes may hold any finite
/// values; display-grade planes stay within [0, 255].
class GrayImage {
public:
    GrayImage(int width, int height, double fill = 0.0)
        : w_(width), h_(height), px_(static_cast<std::size_t>(width) * height, fill) {
        detail::require_dims(width, height);
    }

    int width() const { return w_; }
    int height() const { return h_; }

    double& at(int x, int y) {
        assert(x >= 0 && x < w_ && y >= 0 && y < h_);
        return px_[static_cast<std::size_t>(y) * w_ + x];
    }
    double at(int x, int y) const {
        assert(x >= 0 && x < w_ && y >= 0 && y < h_);
        return px_[static_cast<std::size_t>(y) * w_ + x];
    }

    std::vector<double>& pixels() { return px_; }
    const std::vector<double>& pixels() const { return px_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    int w_, h_;
    std::vector<double> px_;
};

/// Binary mask; pixel values are strictly 0 or 1 with 1 = foreground.
class BinaryImage {
public:
    BinaryImage(int width, int height, std::uint8_t fill = 0)
        : w_(width), h_(height), px_(static_cast<std::size_t>(width) * height, fill) {
        detail::require_dims(width, height);
        assert(fill == 0 || fill == 1);
    }

    int width() const { return w_; }
    int height() const { return h_; }

    std::uint8_t& at(int x, int y) {
        assert(x >= 0 && x < w_ && y >= 0 && y < h_);
        return px_[static_cast<std::size_t>(y) * w_ + x];
    }
    std::uint8_t at(int x, int y) const {
        assert(x >= 0 && x < w_ && y >= 0 && y < h_);
        return px_[static_cast<std::size_t>(y) * w_ + x];
    }

    std::vector<std::uint8_t>& pixels() { return px_; }
    const std::vector<std::uint8_t>& pixels() const { return px_; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto p : px_) n += p;
        return n;
    }

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

private:
    int w_, h_;
    std::vector<std::uint8_t> px_;
};

} // namespace amfm
