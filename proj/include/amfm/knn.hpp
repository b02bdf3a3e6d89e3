#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "amfm/image.hpp"
#include "amfm/pnm.hpp"

namespace amfm {

enum class BlockLabel : std::uint8_t { Face, NonFace };

inline const char* to_string(BlockLabel l) { return l == BlockLabel::Face ? "face" : "nonface"; }

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Lazy KNN over flattened FM blocks. Samples are stored verbatim as byte
/// vectors; classification is a full Euclidean scan with distance ties broken
/// by sample order.
class KnnModel {
public:
    struct Sample {
        BlockLabel label;
        std::vector<std::uint8_t> values;
    };

    KnnModel(int k, int block_w, int block_h)
        : k_(k), block_w_(block_w), block_h_(block_h) {
        if (k < 1 || k % 2 == 0) throw ModelError("knn: k must be odd and positive");
        if (block_w < 1 || block_h < 1) throw ModelError("knn: bad block size");
    }

    int k() const { return k_; }
    int block_width() const { return block_w_; }
    int block_height() const { return block_h_; }
    std::size_t dimension() const { return static_cast<std::size_t>(block_w_) * block_h_; }
    const std::vector<Sample>& samples() const { return samples_; }

    void add_sample(BlockLabel label, std::vector<std::uint8_t> values) {
        if (values.size() != dimension())
            throw ModelError("knn: sample dimension mismatch (expected " +
                             std::to_string(dimension()) + ", got " +
                             std::to_string(values.size()) + ")");
        samples_.push_back({label, std::move(values)});
    }

    bool trained() const { return samples_.size() >= static_cast<std::size_t>(k_); }

    bool single_class() const {
        if (samples_.empty()) return true;
        const BlockLabel first = samples_.front().label;
        for (const Sample& s : samples_)
            if (s.label != first) return false;
        return true;
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw ModelError("knn: cannot write '" + path + "'");
        out << "KNN" << k_ << " " << block_w_ << " " << block_h_ << " " << samples_.size()
            << "\n";
        for (const Sample& s : samples_) {
            out << to_string(s.label);
            for (std::uint8_t v : s.values) out << ' ' << static_cast<int>(v);
            out << '\n';
        }
        if (!out) throw ModelError("knn: write failed for '" + path + "'");
    }

    static KnnModel load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ModelError("knn: cannot open '" + path + "'");
        std::string magic;
        int bw = 0, bh = 0;
        std::size_t n = 0;
        if (!(in >> magic >> bw >> bh >> n) || magic.size() < 4 || magic.substr(0, 3) != "KNN")
            throw ModelError("knn: malformed model header in '" + path + "'");
        int k = 0;
        try {
            k = std::stoi(magic.substr(3));
        } catch (const std::exception&) {
            throw ModelError("knn: malformed model header in '" + path + "'");
        }
        KnnModel model(k, bw, bh);
        for (std::size_t i = 0; i < n; ++i) {
            std::string label;
            if (!(in >> label)) throw ModelError("knn: truncated model '" + path + "'");
            BlockLabel bl;
            if (label == "face")
                bl = BlockLabel::Face;
            else if (label == "nonface")
                bl = BlockLabel::NonFace;
            else
                throw ModelError("knn: bad label '" + label + "' in '" + path + "'");
            std::vector<std::uint8_t> values(model.dimension());
            for (std::size_t j = 0; j < values.size(); ++j) {
                int v;
                if (!(in >> v) || v < 0 || v > 255)
                    throw ModelError("knn: truncated or invalid sample data in '" + path + "'");
                values[j] = static_cast<std::uint8_t>(v);
            }
            model.add_sample(bl, std::move(values));
        }
        return model;
    }

private:
    int k_;
    int block_w_, block_h_;
    std::vector<Sample> samples_;
};

struct KnnVote {
    BlockLabel label = BlockLabel::NonFace;
    double vote_fraction = 0;
};

/// Majority label among the k nearest samples in Euclidean distance over the
/// row-major flattened block.
inline KnnVote knn_classify(const KnnModel& model, const GrayImage& block) {
    if (static_cast<std::size_t>(block.width()) * block.height() != model.dimension() ||
        block.width() != model.block_width() || block.height() != model.block_height())
        throw ModelError("knn: query block dimension mismatch");
    if (!model.trained()) throw ModelError("knn: model has fewer samples than k");

    const auto& samples = model.samples();
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        double d2 = 0;
        const auto& vals = samples[s].values;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const double d = block.pixels()[i] - static_cast<double>(vals[i]);
            d2 += d * d;
        }
        dist.push_back({d2, s});
    }
    const std::size_t k = static_cast<std::size_t>(model.k());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    int face = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (samples[dist[i].second].label == BlockLabel::Face) ++face;
    const int nonface = static_cast<int>(k) - face;
    KnnVote vote;
    vote.label = face > nonface ? BlockLabel::Face : BlockLabel::NonFace;
    vote.vote_fraction = static_cast<double>(std::max(face, nonface)) / static_cast<double>(k);
    return vote;
}

/// Builds a model from a manifest of lines "path,label" with label face or
/// nonface; every path must be a PGM of the model's block size.
inline KnnModel train_knn(const std::string& manifest_path, int k = 3, int block_w = 60,
                          int block_h = 60) {
    std::ifstream in(manifest_path);
    if (!in) throw ModelError("knn: cannot open manifest '" + manifest_path + "'");
    KnnModel model(k, block_w, block_h);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::size_t comma = line.rfind(',');
        if (comma == std::string::npos)
            throw ModelError("knn: manifest line " + std::to_string(lineno) +
                             " is not 'path,label'");
        const std::string path = line.substr(0, comma);
        std::string label = line.substr(comma + 1);
        while (!label.empty() && (label.back() == '\r' || label.back() == ' ')) label.pop_back();
        BlockLabel bl;
        if (label == "face")
            bl = BlockLabel::Face;
        else if (label == "nonface")
            bl = BlockLabel::NonFace;
        else
            throw ModelError("knn: manifest line " + std::to_string(lineno) + ": bad label '" +
                             label + "'");
        std::optional<PnmImage> img;
        try {
            img = load_pnm(path);
        } catch (const std::exception& e) {
            throw ModelError("knn: manifest line " + std::to_string(lineno) + " ('" + path +
                             "'): " + e.what());
        }
        const GrayImage* gray = std::get_if<GrayImage>(&*img);
        if (!gray)
            throw ModelError("knn: manifest line " + std::to_string(lineno) + " ('" + path +
                             "'): expected a PGM block");
        if (gray->width() != block_w || gray->height() != block_h)
            throw ModelError("knn: manifest line " + std::to_string(lineno) + " ('" + path +
                             "'): block must be " + std::to_string(block_w) + "x" +
                             std::to_string(block_h));
        std::vector<std::uint8_t> values(model.dimension());
        for (std::size_t i = 0; i < values.size(); ++i)
            values[i] = static_cast<std::uint8_t>(std::lround(gray->pixels()[i]));
        model.add_sample(bl, std::move(values));
    }
    if (!model.trained())
        throw ModelError("knn: manifest provides fewer than k = " + std::to_string(k) +
                         " samples");
    return model;
}

} // namespace amfm
