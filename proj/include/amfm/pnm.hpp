#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "amfm/image.hpp"

namespace amfm {

struct PnmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using PnmImage = std::variant<RgbImage, GrayImage>;

namespace detail {

class PnmReader {
public:
    explicit PnmReader(const std::string& path) : path_(path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw PnmError("pnm: cannot open '" + path + "'");
        data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    // Reads the next whitespace-delimited token, skipping '#' comments.
    std::string token() {
        skip_space_and_comments();
        std::size_t start = pos_;
        while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
        if (start == pos_) throw PnmError("pnm: malformed header in '" + path_ + "'");
        return data_.substr(start, pos_ - start);
    }

    int header_int(const char* what) {
        const std::string t = token();
        try {
            std::size_t used = 0;
            long v = std::stol(t, &used);
            if (used != t.size() || v < 0) throw std::invalid_argument(t);
            return static_cast<int>(v);
        } catch (const std::exception&) {
            throw PnmError("pnm: malformed header in '" + path_ + "' (bad " + std::string(what) + ")");
        }
    }

    // Positions the cursor at the start of the raw payload: exactly one
    // whitespace byte follows the maxval in binary variants.
    void begin_raw() {
        if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_])))
            throw PnmError("pnm: malformed header in '" + path_ + "'");
        ++pos_;
    }

    const unsigned char* raw(std::size_t n) {
        if (pos_ + n > data_.size())
            throw PnmError("pnm: truncated pixel data in '" + path_ + "'");
        const unsigned char* p = reinterpret_cast<const unsigned char*>(data_.data()) + pos_;
        pos_ += n;
        return p;
    }

    int ascii_sample() {
        const std::string t = token_or_fail("pnm: truncated pixel data in '" + path_ + "'");
        try {
            std::size_t used = 0;
            long v = std::stol(t, &used);
            if (used != t.size() || v < 0 || v > 255) throw std::invalid_argument(t);
            return static_cast<int>(v);
        } catch (const std::exception&) {
            throw PnmError("pnm: invalid ASCII sample in '" + path_ + "'");
        }
    }

private:
    std::string token_or_fail(const std::string& msg) {
        skip_space_and_comments();
        std::size_t start = pos_;
        while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
        if (start == pos_) throw PnmError(msg);
        return data_.substr(start, pos_ - start);
    }

    void skip_space_and_comments() {
        while (pos_ < data_.size()) {
            const char c = data_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string path_;
    std::string data_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Loads a PPM (P3/P6) or PGM (P2/P5) file with maxval 255. PGM yields a
/// GrayImage with exact integer values, PPM an RgbImage.
inline PnmImage load_pnm(const std::string& path) {
    detail::PnmReader rd(path);
    const std::string magic = rd.token();
    if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6")
        throw PnmError("pnm: unsupported magic '" + magic + "' in '" + path + "'");

    const int w = rd.header_int("width");
    const int h = rd.header_int("height");
    const int maxval = rd.header_int("maxval");
    if (w < 1 || h < 1) throw PnmError("pnm: malformed header in '" + path + "' (bad dimensions)");
    if (maxval != 255)
        throw PnmError("pnm: unsupported maxval " + std::to_string(maxval) + " in '" + path +
                       "' (expected 255)");

    const std::size_t n = static_cast<std::size_t>(w) * h;
    if (magic == "P5") {
        rd.begin_raw();
        const unsigned char* p = rd.raw(n);
        GrayImage img(w, h);
        for (std::size_t i = 0; i < n; ++i) img.pixels()[i] = p[i];
        return img;
    }
    if (magic == "P6") {
        rd.begin_raw();
        const unsigned char* p = rd.raw(n * 3);
        RgbImage img(w, h);
        for (std::size_t i = 0; i < n; ++i) img.pixels()[i] = {p[3 * i], p[3 * i + 1], p[3 * i + 2]};
        return img;
    }
    if (magic == "P2") {
        GrayImage img(w, h);
        for (std::size_t i = 0; i < n; ++i) img.pixels()[i] = rd.ascii_sample();
        return img;
    }
    RgbImage img(w, h);
    for (std::size_t i = 0; i < n; ++i) {
        const int r = rd.ascii_sample();
        const int g = rd.ascii_sample();
        const int b = rd.ascii_sample();
        img.pixels()[i] = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                           static_cast<std::uint8_t>(b)};
    }
    return img;
}

namespace detail {

inline std::uint8_t to_byte(double v) {
    if (v <= 0.0) return 0;
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v));
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PnmError("pnm: cannot write '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw PnmError("pnm: write failed for '" + path + "'");
}

} // namespace detail

/// Writes a binary PGM (P5, maxval 255); values are clamped and rounded.
inline void save_pgm(const GrayImage& img, const std::string& path) {
    std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                      "\n255\n";
    out.reserve(out.size() + img.pixels().size());
    for (double v : img.pixels()) out.push_back(static_cast<char>(detail::to_byte(v)));
    detail::write_file(path, out);
}

/// Writes a binary PPM (P6, maxval 255).
inline void save_ppm(const RgbImage& img, const std::string& path) {
    std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                      "\n255\n";
    out.reserve(out.size() + img.pixels().size() * 3);
    for (const Rgb8& p : img.pixels()) {
        out.push_back(static_cast<char>(p.r));
        out.push_back(static_cast<char>(p.g));
        out.push_back(static_cast<char>(p.b));
    }
    detail::write_file(path, out);
}

} // namespace amfm
