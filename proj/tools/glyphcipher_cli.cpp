// Command-line front end: key management, Hill cipher text modes, glyph
// rendering, network training, and image decoding.
//
// Exit codes: 0 success, 2 usage error, 3 data/format error,
// 4 not-invertible key, 5 training divergence.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "glyphcipher/hill.hpp"
#include "glyphcipher/neuralnet.hpp"
#include "glyphcipher/pipeline.hpp"
#include "glyphcipher/raster.hpp"
#include "glyphcipher/segment.hpp"
#include "glyphcipher/zmod.hpp"

namespace gc = glyphcipher;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitKey = 4;
constexpr int kExitDiverged = 5;

struct KeygenArgs {
    int n = 2;
    std::uint64_t seed = 0;
    std::string out;
};

struct TextArgs {
    std::string key;
    std::string text;
};

struct RenderArgs {
    std::string text;
    std::string out;
    gc::RenderSpec spec;
};

struct TrainArgs {
    std::string out;
    int hidden = 24;
    int copies = 4;
    double noise = 0.02;
    std::uint64_t seed = 1;
    double goal = 0.1;
    int max_epochs = 1000;
    std::string trainer = "adaptive";
};

struct OcrArgs {
    std::string image;
    std::string model;
    bool direct = false;
};

struct DecodeArgs {
    std::string image;
    std::string model;
    std::string key;
    std::size_t skip = 0;
    std::optional<std::size_t> take;
    std::optional<double> min_confidence;
    std::optional<std::string> dump_stages;
    bool direct = false;
};

struct EncryptImageArgs {
    std::string key;
    std::string text;
    std::string out;
};

void print_matrix(const gc::ModMatrix& m) {
    for (int r = 0; r < m.dim(); ++r) {
        for (int c = 0; c < m.dim(); ++c) std::cout << (c ? " " : "") << m.at(r, c);
        std::cout << '\n';
    }
}

int run_inspect_key(const std::string& path) {
    const gc::ModMatrix m = gc::load_key_matrix(path);
    const std::int64_t det = gc::mat_det_mod(m);
    const auto rec = gc::reciprocal_mod(det, gc::kAlphabetMod);
    std::cout << "n: " << m.dim() << '\n';
    std::cout << "det mod 26: " << det << '\n';
    std::cout << "unit: " << (rec ? "yes" : "no") << '\n';
    if (!rec) {
        std::cout << "inverse: none (det shares factor " << std::gcd(det, gc::kAlphabetMod)
                  << " with 26)\n";
        return kExitKey;
    }
    std::cout << "inverse:\n";
    print_matrix(gc::HillKey(m).inverse());
    return 0;
}

int run_train(const TrainArgs& args) {
    gc::TrainConfig cfg;
    cfg.goal = args.goal;
    cfg.max_epochs = args.max_epochs;
    cfg.seed = args.seed;
    cfg.trainer = args.trainer == "momentum" ? gc::Trainer::momentum : gc::Trainer::adaptive;

    const gc::Dataset corpus =
        gc::build_corpus("ABCDEFGHIJKLMNOPQRSTUVWXYZ", args.copies, args.noise, args.seed);
    gc::Mlp net = gc::init_mlp(args.hidden, args.seed + 1);
    const gc::TrainResult res = gc::train(net, corpus, cfg);
    gc::save_model(net, args.out);

    std::cout << "epochs: " << res.epochs << '\n';
    std::cout << "final mse: " << std::setprecision(7) << res.final_mse << '\n';
    std::cout << "goal met: " << (res.goal_met ? "yes" : "no") << '\n';
    return 0;
}

int run_decode(const DecodeArgs& args) {
    const gc::GrayImage img = gc::read_image(args.image);
    const gc::Mlp net = gc::load_model(args.model);
    const gc::HillKey key = gc::load_key(args.key);

    gc::DecodeOptions opts;
    opts.skip = args.skip;
    opts.take = args.take;
    opts.min_confidence = args.min_confidence;
    opts.chain.direct = args.direct;
    if (args.dump_stages) {
        std::filesystem::create_directories(*args.dump_stages);
        opts.chain.dump_dir = *args.dump_stages;
    }

    const gc::DecodeReport report = gc::decode_image(img, net, key, opts);
    std::cout << "recognized: " << report.recognized << '\n';
    std::cout << "confidences:" << std::setprecision(4);
    for (double c : report.confidences) std::cout << ' ' << c;
    std::cout << '\n';
    std::cout << "selected: " << report.selected << '\n';
    std::cout << "plaintext: " << report.plaintext << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hill cipher over glyph images: encrypt text, render it, recover it by OCR"};
    app.require_subcommand(1);

    KeygenArgs keygen;
    auto* cmd_keygen = app.add_subcommand("keygen", "Generate a random invertible key");
    cmd_keygen->add_option("--n", keygen.n, "Key dimension")->capture_default_str();
    cmd_keygen->add_option("--seed", keygen.seed, "RNG seed")->capture_default_str();
    cmd_keygen->add_option("--out", keygen.out, "Key file to write")->required();

    std::string inspect_path;
    auto* cmd_inspect = app.add_subcommand("inspect-key", "Print key diagnostics");
    cmd_inspect->add_option("--key", inspect_path, "Key file")->required();

    TextArgs enc;
    auto* cmd_encrypt = app.add_subcommand("encrypt", "Encrypt text to stdout");
    cmd_encrypt->add_option("--key", enc.key, "Key file")->required();
    cmd_encrypt->add_option("--text", enc.text, "Plaintext (A-Z and spaces)")->required();

    TextArgs dec;
    auto* cmd_decrypt = app.add_subcommand("decrypt", "Decrypt text to stdout");
    cmd_decrypt->add_option("--key", dec.key, "Key file")->required();
    cmd_decrypt->add_option("--text", dec.text, "Ciphertext (A-Z)")->required();

    RenderArgs render;
    auto* cmd_render = app.add_subcommand("render", "Render text to a P5 image");
    cmd_render->add_option("--text", render.text, "Text (A-Z and spaces)")->required();
    cmd_render->add_option("--out", render.out, "Output .pgm path")->required();
    cmd_render->add_option("--scale", render.spec.scale, "Pixels per font cell")->capture_default_str();
    cmd_render->add_option("--spacing", render.spec.spacing, "Pixels between glyphs")->capture_default_str();
    cmd_render->add_option("--margin", render.spec.margin, "Border pixels")->capture_default_str();
    cmd_render->add_option("--per-row", render.spec.per_row, "Glyphs per row")->capture_default_str();

    TrainArgs train;
    auto* cmd_train = app.add_subcommand("train", "Train the classifier on rendered letters");
    cmd_train->add_option("--out", train.out, "Model file to write")->required();
    cmd_train->add_option("--hidden", train.hidden, "Hidden units")->capture_default_str();
    cmd_train->add_option("--copies", train.copies, "Copies per letter")->capture_default_str();
    cmd_train->add_option("--noise", train.noise, "Feature flip probability")->capture_default_str();
    cmd_train->add_option("--seed", train.seed, "RNG seed")->capture_default_str();
    cmd_train->add_option("--goal", train.goal, "MSE stop goal")->capture_default_str();
    cmd_train->add_option("--max-epochs", train.max_epochs, "Epoch cap")->capture_default_str();
    cmd_train->add_option("--trainer", train.trainer, "adaptive|momentum")
        ->check(CLI::IsMember({"adaptive", "momentum"}))
        ->capture_default_str();

    OcrArgs ocr;
    auto* cmd_ocr = app.add_subcommand("ocr", "Recognize letters in an image");
    cmd_ocr->add_option("--image", ocr.image, "Input netpbm image")->required();
    cmd_ocr->add_option("--model", ocr.model, "Model file")->required();
    cmd_ocr->add_flag("--direct", ocr.direct, "Label the binarized image directly");

    DecodeArgs decode;
    auto* cmd_decode = app.add_subcommand("decode-image", "OCR an image and Hill-decrypt it");
    cmd_decode->add_option("--image", decode.image, "Input netpbm image")->required();
    cmd_decode->add_option("--model", decode.model, "Model file")->required();
    cmd_decode->add_option("--key", decode.key, "Key file")->required();
    cmd_decode->add_option("--skip", decode.skip, "Glyphs to skip from the front");
    cmd_decode->add_option("--take", decode.take, "Glyph count to decode");
    cmd_decode->add_option("--min-confidence", decode.min_confidence,
                           "Error on glyphs below this confidence");
    cmd_decode->add_option("--dump-stages", decode.dump_stages,
                           "Directory for intermediate stage images");
    cmd_decode->add_flag("--direct", decode.direct, "Label the binarized image directly");

    EncryptImageArgs enc_img;
    auto* cmd_enc_img = app.add_subcommand("encrypt-to-image", "Encrypt text and render it");
    cmd_enc_img->add_option("--key", enc_img.key, "Key file")->required();
    cmd_enc_img->add_option("--text", enc_img.text, "Plaintext (A-Z and spaces)")->required();
    cmd_enc_img->add_option("--out", enc_img.out, "Output .pgm path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (cmd_keygen->parsed()) {
            gc::save_key(gc::HillKey::generate(keygen.n, keygen.seed), keygen.out);
            return 0;
        }
        if (cmd_inspect->parsed()) return run_inspect_key(inspect_path);
        if (cmd_encrypt->parsed()) {
            std::cout << gc::encrypt(enc.text, gc::load_key(enc.key)) << '\n';
            return 0;
        }
        if (cmd_decrypt->parsed()) {
            std::cout << gc::decrypt(dec.text, gc::load_key(dec.key)) << '\n';
            return 0;
        }
        if (cmd_render->parsed()) {
            gc::write_image(gc::render_text(render.text, gc::GlyphFont::builtin(), render.spec),
                            render.out);
            return 0;
        }
        if (cmd_train->parsed()) return run_train(train);
        if (cmd_ocr->parsed()) {
            gc::ChainOptions opts;
            opts.direct = ocr.direct;
            std::cout << gc::ocr_image(gc::read_image(ocr.image), gc::load_model(ocr.model), opts).text
                      << '\n';
            return 0;
        }
        if (cmd_decode->parsed()) return run_decode(decode);
        if (cmd_enc_img->parsed()) {
            gc::encrypt_to_image(enc_img.text, gc::load_key(enc_img.key), gc::RenderSpec{},
                                 enc_img.out);
            return 0;
        }
    } catch (const gc::NotInvertibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitKey;
    } catch (const gc::TrainingDivergedError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
