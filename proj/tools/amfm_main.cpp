// Batch driver for multiscale AM-FM demodulation and head-direction
// detection: demodulate frames, train the block classifier, run detection
// over frames or directories, and self-check with the built-in bench.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "amfm/color.hpp"
#include "amfm/demod.hpp"
#include "amfm/gabor.hpp"
#include "amfm/knn.hpp"
#include "amfm/overlay.hpp"
#include "amfm/parallel.hpp"
#include "amfm/phantom.hpp"
#include "amfm/pipeline.hpp"
#include "amfm/pnm.hpp"
#include "amfm/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitModel = 3;
constexpr int kExitDegenerate = 4;

struct Options {
    amfm::PipelineConfig cfg;
    std::string classifier = "majority";
    std::string bank_file;

    void apply_classifier() {
        cfg.classifier = classifier == "fig412" ? amfm::ClassifierKind::Fig412
                                                : amfm::ClassifierKind::Majority;
    }

    amfm::Filterbank load_bank() const {
        return bank_file.empty() ? amfm::Filterbank::build() : amfm::Filterbank::from_file(bank_file);
    }
};

void add_common_flags(CLI::App* app, Options& opt) {
    app->set_config("--config", "", "Config file of key=value lines (flags override)");
    app->add_option("--block-size", opt.cfg.block_size, "Classifier block side")
        ->capture_default_str();
    app->add_option("--stride", opt.cfg.stride, "Block grid stride")->capture_default_str();
    app->add_option("--head-window", opt.cfg.head_window, "Density scan window side")
        ->capture_default_str();
    app->add_option("--top-columns", opt.cfg.top_columns, "Columns kept before the density scan")
        ->capture_default_str();
    app->add_option("--top-rows", opt.cfg.top_rows, "Rows kept in the patch analysis")
        ->capture_default_str();
    app->add_option("--canny-sigma", opt.cfg.canny_sigma, "Canny Gaussian sigma")
        ->capture_default_str();
    app->add_option("--canny-lo", opt.cfg.canny_lo, "Canny low threshold fraction")
        ->capture_default_str();
    app->add_option("--canny-hi", opt.cfg.canny_hi, "Canny high threshold fraction")
        ->capture_default_str();
    app->add_option("--skin-frac", opt.cfg.skin_fraction, "Minimum skin fraction per face block")
        ->capture_default_str();
    app->add_option("--min-skin-area", opt.cfg.min_skin_area, "Minimum skin component area")
        ->capture_default_str();
    app->add_option("--classifier", opt.classifier, "Face direction classifier (majority|fig412)")
        ->check(CLI::IsMember({"majority", "fig412"}))
        ->capture_default_str();
    app->add_option("--threads", opt.cfg.threads, "Worker threads (0 = auto)")
        ->capture_default_str();
    app->add_option("--bank-file", opt.bank_file, "Filterbank parameter override file");
}

amfm::GrayImage to_gray_any(const amfm::PnmImage& img) {
    if (const auto* rgb = std::get_if<amfm::RgbImage>(&img)) return amfm::to_gray(*rgb);
    return std::get<amfm::GrayImage>(img);
}

amfm::RgbImage to_rgb_any(const amfm::PnmImage& img) {
    if (const auto* rgb = std::get_if<amfm::RgbImage>(&img)) return *rgb;
    const auto& gray = std::get<amfm::GrayImage>(img);
    amfm::RgbImage out(gray.width(), gray.height());
    for (std::size_t i = 0; i < gray.pixels().size(); ++i) {
        const auto v = static_cast<std::uint8_t>(
            std::lround(std::clamp(gray.pixels()[i], 0.0, 255.0)));
        out.pixels()[i] = {v, v, v};
    }
    return out;
}

std::vector<fs::path> collect_frames(const std::string& input) {
    std::vector<fs::path> frames;
    const fs::path p(input);
    if (fs::is_directory(p)) {
        for (const auto& e : fs::directory_iterator(p)) {
            if (!e.is_regular_file()) continue;
            std::string ext = e.path().extension().string();
            std::transform(ext.begin(), ext.end(), ext.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") frames.push_back(e.path());
        }
        std::sort(frames.begin(), frames.end());
    } else {
        frames.push_back(p);
    }
    return frames;
}

int run_demod(const Options& opt, const std::string& input, const std::string& out_am,
              const std::string& out_fm, const std::string& scale,
              const std::string& dump_dir) {
    const amfm::Filterbank bank = opt.load_bank();
    amfm::Selection sel = amfm::Selection::all();
    if (scale != "all") sel = amfm::Selection::scale_group(std::stoi(scale));

    const amfm::GrayImage gray = to_gray_any(amfm::load_pnm(input));
    const amfm::AnalyticImage asig = amfm::analytic_image(gray);

    if (!dump_dir.empty()) {
        fs::create_directories(dump_dir);
        for (std::size_t i = 0; i < bank.size(); ++i) {
            if (!sel.admits(bank[i].scale_group)) continue;
            const amfm::ChannelField ch =
                amfm::demodulate_channel(asig, bank[i], static_cast<int>(i));
            amfm::GrayImage ia(ch.width, ch.height), ip(ch.width, ch.height);
            double hi = 0;
            for (double v : ch.ia) hi = std::max(hi, v);
            const double s = hi > 0 ? 255.0 / hi : 0.0;
            for (std::size_t k = 0; k < ch.ia.size(); ++k) {
                ia.pixels()[k] = ch.ia[k] * s;
                ip.pixels()[k] = (ch.ip[k] + std::numbers::pi) / (2 * std::numbers::pi) * 255.0;
            }
            char name[64];
            std::snprintf(name, sizeof(name), "ch%02zu_ia.pgm", i);
            amfm::save_pgm(ia, (fs::path(dump_dir) / name).string());
            std::snprintf(name, sizeof(name), "ch%02zu_ip.pgm", i);
            amfm::save_pgm(ip, (fs::path(dump_dir) / name).string());
        }
    }

    const amfm::AmFmField field = amfm::demodulate_frame(asig, bank, sel, opt.cfg.threads);
    if (!out_am.empty()) amfm::save_pgm(amfm::am_image(field), out_am);
    if (!out_fm.empty()) amfm::save_pgm(amfm::fm_image(field), out_fm);
    return 0;
}

int run_detect(const Options& opt, const std::string& input, const std::string& model_path,
               const std::string& json_path, const std::string& overlay_dir) {
    const amfm::Filterbank bank = opt.load_bank();
    const amfm::KnnModel model = amfm::KnnModel::load(model_path);

    const std::vector<fs::path> frames = collect_frames(input);
    if (frames.empty()) throw amfm::PnmError("detect: no frames found in '" + input + "'");

    std::vector<amfm::FrameReport> reports(frames.size());
    std::vector<amfm::RgbImage> images;
    images.reserve(frames.size());
    for (const auto& f : frames) images.push_back(to_rgb_any(amfm::load_pnm(f.string())));

    // Frame-level parallelism; each frame runs its channels serially so the
    // worker pool is the only source of concurrency. Results are gathered by
    // index, so output order equals input order for any thread count.
    const int workers = amfm::resolve_threads(opt.cfg.threads);
    amfm::PipelineConfig per_frame = opt.cfg;
    if (frames.size() > 1) per_frame.threads = 1;
    amfm::parallel_for(static_cast<int>(frames.size()), workers, [&](int i) {
        reports[static_cast<std::size_t>(i)] = amfm::analyze_frame(
            images[static_cast<std::size_t>(i)], model, bank, per_frame, i);
    });

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!json_path.empty()) {
        file.open(json_path, std::ios::trunc);
        if (!file) throw amfm::PnmError("detect: cannot write '" + json_path + "'");
        out = &file;
    }
    bool all_degenerate = true;
    for (const auto& rep : reports) {
        *out << amfm::to_json_line(rep) << '\n';
        if (!rep.degenerate) all_degenerate = false;
    }

    if (!overlay_dir.empty()) {
        fs::create_directories(overlay_dir);
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const std::string name = frames[i].stem().string() + "_overlay.ppm";
            amfm::save_overlay(images[i], reports[i].detections,
                               (fs::path(overlay_dir) / name).string());
        }
    }
    return all_degenerate ? kExitDegenerate : 0;
}

int run_train(const Options& opt, const std::string& manifest, const std::string& out_path,
              int k) {
    const amfm::KnnModel model =
        amfm::train_knn(manifest, k, opt.cfg.block_size, opt.cfg.block_size);
    if (model.single_class())
        std::cerr << "warning: manifest contains a single class only\n";
    model.save(out_path);
    std::cout << "trained " << model.samples().size() << " samples -> " << out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// bench: phantom self-checks with timings, one line per check.
// ---------------------------------------------------------------------------

struct BenchCheck {
    std::string name;
    bool pass;
    std::string detail;
    double seconds;
};

int run_bench(const Options& opt) {
    using Clock = std::chrono::steady_clock;
    std::vector<BenchCheck> checks;
    auto timed = [&](const std::string& name, auto&& fn) {
        const auto t0 = Clock::now();
        std::pair<bool, std::string> r = fn();
        const double s = std::chrono::duration<double>(Clock::now() - t0).count();
        checks.push_back({name, r.first, r.second, s});
    };

    const amfm::Filterbank bank = opt.load_bank();
    amfm::PipelineConfig cfg = opt.cfg;

    timed("filterbank", [&]() -> std::pair<bool, std::string> {
        bool ok = bank.size() == 54 && bank.group_size(0) == 24 && bank.group_size(1) == 20 &&
                  bank.group_size(2) == 8 && bank.group_size(3) == 2;
        for (std::size_t i = 0; i < bank.size(); ++i) {
            const auto& f = bank[i];
            ok = ok && std::abs(f.f - f.l) <= 1e-12 &&
                 std::abs(f.theta - f.ang_deg * std::numbers::pi / 180.0) <= 1e-12 &&
                 std::abs(f.u) <= std::numbers::pi && std::abs(f.v) <= std::numbers::pi;
        }
        return {ok, "54 filters in groups 24/20/8/2"};
    });

    timed("analytic-quadrature", [&]() -> std::pair<bool, std::string> {
        const int w = 128, h = 16, k = 9;
        amfm::GrayImage img(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                img.at(x, y) = std::cos(2.0 * std::numbers::pi * k * x / w);
        const amfm::AnalyticImage asig = amfm::analytic_image(img);
        double worst = 0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                worst = std::max(worst, std::abs(asig.im(x, y) -
                                                 std::sin(2.0 * std::numbers::pi * k * x / w)));
        return {worst < 1e-9, "cosine -> sine, max err " + std::to_string(worst)};
    });

    timed("face-direction-planes", [&]() -> std::pair<bool, std::string> {
        const amfm::GrayImage left = amfm::phantom::make_face_fm_block(180, true);
        const amfm::GrayImage right = amfm::phantom::mirror_horizontal(left);
        const auto pl = amfm::patch_counts(left, cfg.top_rows);
        const auto pr = amfm::patch_counts(right, cfg.top_rows);
        if (!pl.ok || !pr.ok) return {false, "patch analysis abstained"};
        const auto dl = amfm::majority_direction(pl.counts).first;
        const auto dr = amfm::majority_direction(pr.counts).first;
        return {dl == amfm::Direction::Left && dr == amfm::Direction::Right,
                std::string("left block -> ") + amfm::to_string(dl) + ", mirrored -> " +
                    amfm::to_string(dr)};
    });

    timed("head-planes", [&]() -> std::pair<bool, std::string> {
        const auto planes = amfm::phantom::make_head_planes();
        const auto det = amfm::back_of_head_detect(planes.am, planes.fm);
        if (!det) return {false, "no detection"};
        const double ex = det->box.center_x() - planes.head_box.center_x();
        const double ey = det->box.center_y() - planes.head_box.center_y();
        return {std::abs(ex) <= 20 && std::abs(ey) <= 20,
                "center error (" + std::to_string(ex) + ", " + std::to_string(ey) + ") px"};
    });

    timed("frame-pipeline", [&]() -> std::pair<bool, std::string> {
        const auto face = amfm::phantom::make_face_phantom();
        const amfm::KnnModel model =
            amfm::phantom::make_toy_model({{face.frame, face.face_box}}, bank, cfg);
        const amfm::FrameReport rep = amfm::analyze_frame(face.frame, model, bank, cfg, 0);
        int faces = 0;
        for (const auto& rd : rep.detections)
            if (rd.detection.kind == amfm::DetectionKind::Face &&
                rd.detection.box.intersection_area(face.face_box) > 0)
                ++faces;
        const std::string j1 = amfm::to_json_line(rep);
        amfm::PipelineConfig cfg8 = cfg;
        cfg8.threads = 8;
        const std::string j8 = amfm::to_json_line(amfm::analyze_frame(face.frame, model, bank, cfg8, 0));
        return {faces == 1 && j1 == j8,
                faces == 1 ? "one face detection, thread-count invariant" : "unexpected detections"};
    });

    timed("demod-floor-640x480", [&]() -> std::pair<bool, std::string> {
        amfm::GrayImage img(640, 480);
        for (int y = 0; y < 480; ++y)
            for (int x = 0; x < 640; ++x)
                img.at(x, y) = 128.0 + 100.0 * std::cos(0.3 * x) * std::cos(0.2 * y);
        const auto t0 = Clock::now();
        const amfm::AnalyticImage asig = amfm::analytic_image(img);
        const amfm::AmFmField field =
            amfm::demodulate_frame(asig, bank, amfm::Selection::all(), cfg.threads);
        const double s = std::chrono::duration<double>(Clock::now() - t0).count();
        (void)field;
        return {s < 5.0, std::to_string(s) + " s (limit 5 s)"};
    });

    timed("density-floor-640x480", [&]() -> std::pair<bool, std::string> {
        amfm::BinaryImage img(640, 480);
        for (int y = 0; y < 480; ++y)
            for (int x = 0; x < 640; ++x)
                img.at(x, y) = amfm::phantom::hash_jitter(
                                   static_cast<std::uint32_t>(y * 640 + x), 3u, 2u) != 0;
        const auto t0 = Clock::now();
        const auto win = amfm::highest_dot_density_area(img, 200);
        const double s = std::chrono::duration<double>(Clock::now() - t0).count();
        (void)win;
        return {s < 0.05, std::to_string(s * 1000.0) + " ms (limit 50 ms)"};
    });

    bool all = true;
    for (const auto& c : checks) {
        std::printf("%-26s %s  %s  [%.2f s]\n", c.name.c_str(), c.pass ? "PASS" : "FAIL",
                    c.detail.c_str(), c.seconds);
        all = all && c.pass;
    }
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiscale AM-FM demodulation and head-direction detection"};
    app.require_subcommand(1);

    Options opt;

    std::string demod_in, demod_am, demod_fm, demod_scale = "all", demod_dump;
    CLI::App* demod = app.add_subcommand("demod", "Demodulate one frame and dump AM/FM planes");
    demod->add_option("input", demod_in, "Input PPM/PGM frame")->required();
    demod->add_option("--out-am", demod_am, "Output AM plane (PGM)");
    demod->add_option("--out-fm", demod_fm, "Output FM plane (PGM)");
    demod->add_option("--scale", demod_scale, "Scale group (0..3) or 'all'");
    demod->add_option("--dump-channels", demod_dump, "Directory for per-channel IA/IP planes");
    add_common_flags(demod, opt);

    std::string train_manifest, train_out;
    int train_k = 3;
    CLI::App* train = app.add_subcommand("train-knn", "Train the block classifier");
    train->add_option("manifest", train_manifest, "Lines of 'path,label' (label face|nonface)")
        ->required();
    train->add_option("--out", train_out, "Output model file")->required();
    train->add_option("--knn-k", train_k, "Neighbor count (odd)")->capture_default_str();
    add_common_flags(train, opt);

    std::string det_in, det_model, det_json, det_overlay;
    CLI::App* det = app.add_subcommand("detect", "Detect faces and backs of heads");
    det->add_option("input", det_in, "Frame file or directory of frames")->required();
    det->add_option("--model", det_model, "KNN model file")->required();
    det->add_option("--json", det_json, "Output JSON path (default stdout)");
    det->add_option("--overlay-dir", det_overlay, "Directory for overlay images");
    add_common_flags(det, opt);

    CLI::App* bench = app.add_subcommand("bench", "Run the phantom self-checks with timings");
    add_common_flags(bench, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    opt.apply_classifier();
    try {
        if (demod->parsed()) return run_demod(opt, demod_in, demod_am, demod_fm, demod_scale, demod_dump);
        if (train->parsed()) return run_train(opt, train_manifest, train_out, train_k);
        if (det->parsed()) return run_detect(opt, det_in, det_model, det_json, det_overlay);
        if (bench->parsed()) return run_bench(opt);
    } catch (const amfm::ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModel;
    } catch (const amfm::PnmError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
