// fpauth: seal grayscale images into self-authenticating fixed points of a
// keyed convolution-deconvolution operator, verify their integrity, localize
// tampering, and drive the attack simulators.
//
// Exit codes: 0 success (and authentic for verify), 1 inauthentic,
// 2 usage error, 3 processing error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fpa/fpa.hpp>

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fpa::SecretKey load_key(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw fpa::IoError("cannot open key file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return fpa::parse_key(buf.str());
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw fpa::IoError("cannot open '" + path + "' for writing");
    }
    out << text;
}

fpa::ImageFileFormat format_for(const std::string& path) {
    const bool png = path.size() > 4 && path.compare(path.size() - 4, 4, ".png") == 0;
    return png ? fpa::ImageFileFormat::png_gray8 : fpa::ImageFileFormat::pgm_binary;
}

std::string psnr_text(double v) {
    if (std::isinf(v)) {
        return "inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// Attack spec grammar: KIND or KIND:key=value,key=value,...
// region=row:col:height:width, donor=path, other_key=path, numbers otherwise.
fpa::AttackSpec parse_attack_spec(const std::string& text, std::uint64_t seed) {
    fpa::AttackSpec spec;
    spec.seed = seed;
    const std::size_t colon = text.find(':');
    const std::string kind_name = text.substr(0, colon);
    try {
        spec.kind = fpa::attack_kind_from_string(kind_name);
    } catch (const fpa::ParameterError& e) {
        throw UsageError(e.what());
    }
    if (colon == std::string::npos) {
        return spec;
    }
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw UsageError("attack spec item '" + item + "' is not key=value");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "region") {
            int v[4] = {0, 0, 0, 0};
            if (std::sscanf(value.c_str(), "%d:%d:%d:%d", &v[0], &v[1], &v[2], &v[3]) != 4) {
                throw UsageError("region must be row:col:height:width, got '" + value + "'");
            }
            spec.region = fpa::Rect{v[0], v[1], v[2], v[3]};
        } else if (key == "donor") {
            spec.donor = fpa::read_image(value);
        } else if (key == "other_key") {
            spec.other_key = load_key(value);
        } else {
            char* end = nullptr;
            const double num = std::strtod(value.c_str(), &end);
            if (end != value.c_str() + value.size() || value.empty()) {
                throw UsageError("attack parameter '" + key + "' has non-numeric value '" +
                                 value + "'");
            }
            spec.params[key] = num;
        }
    }
    return spec;
}

fpa::Rect centered_region(int h, int w, int rh, int rw) {
    return {(h - rh) / 2, (w - rw) / 2, rh, rw};
}

std::vector<fpa::AttackSpec> fragility_suite(const fpa::Image& sealed, std::uint64_t seed) {
    const int h = sealed.height();
    const int w = sealed.width();
    std::vector<fpa::AttackSpec> specs;

    fpa::AttackSpec rewrite;
    rewrite.kind = fpa::AttackKind::rewrite_other_key;
    fpa::Rng rng(seed ^ 0x5eedf00dULL);
    rewrite.other_key = fpa::SecretKey(static_cast<int>(rng.uniform_int(300000, 700000)),
                                       fpa::generate_key(h, w, 2, seed ^ 0xa11ceULL).mods());
    rewrite.seed = seed;
    specs.push_back(rewrite);

    for (const fpa::AttackKind kind :
         {fpa::AttackKind::quant_noise, fpa::AttackKind::flip_h, fpa::AttackKind::flip_v,
          fpa::AttackKind::scale, fpa::AttackKind::histogram_stretch}) {
        fpa::AttackSpec spec;
        spec.kind = kind;
        spec.seed = seed;
        specs.push_back(spec);
    }
    if (h == w) {
        for (const fpa::AttackKind kind :
             {fpa::AttackKind::transpose, fpa::AttackKind::rotate90}) {
            fpa::AttackSpec spec;
            spec.kind = kind;
            spec.seed = seed;
            specs.push_back(spec);
        }
    }
    fpa::AttackSpec crop;
    crop.kind = fpa::AttackKind::crop_replace;
    crop.region = centered_region(h, w, std::max(8, h / 4), std::max(8, w / 4));
    crop.seed = seed;
    specs.push_back(crop);
    return specs;
}

std::vector<fpa::AttackSpec> localization_suite(const fpa::Image& sealed,
                                                const fpa::SecretKey& key, std::uint64_t seed) {
    const int h = sealed.height();
    const int w = sealed.width();
    const int side = std::max(8, std::min(h, w) / 5);
    // two rows of five cells, one local attack per cell
    const auto cell_region = [&](int index) {
        const int cr = index / 5;
        const int cc = index % 5;
        const int cell_h = h / 2;
        const int cell_w = w / 5;
        const int r = cr * cell_h + std::max(0, (cell_h - side) / 2);
        const int c = cc * cell_w + std::max(0, (cell_w - side) / 2);
        return fpa::Rect{std::min(r, h - side), std::min(c, w - side), side, side};
    };

    std::vector<fpa::AttackSpec> specs;
    int cell = 0;
    const auto add = [&](fpa::AttackKind kind) -> fpa::AttackSpec& {
        fpa::AttackSpec spec;
        spec.kind = kind;
        spec.region = cell_region(cell++);
        spec.seed = seed + static_cast<std::uint64_t>(cell);
        specs.push_back(std::move(spec));
        return specs.back();
    };

    add(fpa::AttackKind::salt_pepper_local).params["density"] = 0.05;
    add(fpa::AttackKind::gauss_noise_local).params["stddev"] = 10.0;
    add(fpa::AttackKind::median_local);
    add(fpa::AttackKind::gauss_filter_local);
    add(fpa::AttackKind::histogram_stretch);
    add(fpa::AttackKind::copy_external).donor = fpa::flip_vertical(sealed);
    {
        fpa::AttackSpec& spec = add(fpa::AttackKind::copy_internal);
        spec.params["src_row"] = spec.region->row > h / 2 ? 0 : h - side;
        spec.params["src_col"] = spec.region->col > w / 2 ? 0 : w - side;
    }
    add(fpa::AttackKind::cover_constant).params["value"] = 224.0;
    add(fpa::AttackKind::collage).donor =
        fpa::seal(fpa::flip_horizontal(sealed), key).fixed_point;
    add(fpa::AttackKind::logo_overlay).params["alpha"] = 0.6;
    return specs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-point image integrity authentication"};
    app.require_subcommand(1);

    // keygen
    auto* keygen = app.add_subcommand("keygen", "generate a secret key for an image size");
    int kg_width = 0;
    int kg_height = 0;
    int kg_mods = 6;
    std::uint64_t kg_seed = 1;
    std::string kg_out;
    keygen->add_option("--width", kg_width, "image width in pixels")->required();
    keygen->add_option("--height", kg_height, "image height in pixels")->required();
    keygen->add_option("--mods", kg_mods, "number of filter modification points (default 6)");
    keygen->add_option("--seed", kg_seed, "random seed");
    keygen->add_option("--out", kg_out, "key file to write")->required();

    // seal
    auto* seal_cmd = app.add_subcommand("seal", "drive an image to a keyed fixed point");
    std::string s_in, s_key, s_out, s_report;
    int s_max_iter = 64;
    seal_cmd->add_option("--in", s_in, "input image (PGM/PNG)")->required();
    seal_cmd->add_option("--key", s_key, "key file")->required();
    seal_cmd->add_option("--out", s_out, "output image")->required();
    seal_cmd->add_option("--max-iter", s_max_iter, "iteration budget (default 64)");
    seal_cmd->add_option("--report", s_report, "write a key=value report to this file");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "check whether an image is a keyed fixed point");
    std::string v_in, v_key, v_map, v_report;
    verify_cmd->add_option("--in", v_in, "image to verify")->required();
    verify_cmd->add_option("--key", v_key, "key file")->required();
    verify_cmd->add_option("--map", v_map, "write the tamper map image here");
    verify_cmd->add_option("--report", v_report, "write a key=value report to this file");

    // attack
    auto* attack_cmd = app.add_subcommand("attack", "apply one simulated attack");
    std::string a_in, a_key, a_spec, a_out, a_truth;
    std::uint64_t a_seed = 1;
    attack_cmd->add_option("--in", a_in, "input image")->required();
    attack_cmd->add_option("--key", a_key, "key file")->required();
    attack_cmd->add_option("--spec", a_spec, "attack spec, e.g. COVER_CONSTANT:region=8:8:24:24,value=128")
        ->required();
    attack_cmd->add_option("--seed", a_seed, "random seed");
    attack_cmd->add_option("--out", a_out, "attacked image")->required();
    attack_cmd->add_option("--truth", a_truth, "write the may-have-changed mask here");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "run an attack suite against a sealed image");
    std::string e_in, e_key, e_suite, e_out;
    exp_cmd->add_option("--in", e_in, "sealed input image")->required();
    exp_cmd->add_option("--key", e_key, "key file")->required();
    exp_cmd->add_option("--suite", e_suite, "fragility or localization")->required();
    exp_cmd->add_option("--out", e_out, "report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(keygen)) {
            const fpa::SecretKey key = fpa::generate_key(kg_height, kg_width, kg_mods, kg_seed);
            save_text(kg_out, fpa::serialize_key(key) + "\n");
            std::printf("key=%s\n", fpa::serialize_key(key).c_str());
            std::printf("key_space_bits=%.2f\n", fpa::key_space_bits(kg_height, kg_width, kg_mods));
            return 0;
        }

        if (app.got_subcommand(seal_cmd)) {
            const fpa::Image original = fpa::read_image(s_in);
            const fpa::SecretKey key = load_key(s_key);
            const fpa::SealResult res = fpa::seal(original, key, s_max_iter);
            fpa::write_image(res.fixed_point, s_out, format_for(s_out));
            std::string report;
            report += "iterations=" + std::to_string(res.iterations) + "\n";
            report += "adjustments=" + std::to_string(res.adjustments) + "\n";
            report += "final_adjust_strength=" + std::to_string(res.final_adjust_strength) + "\n";
            report += "psnr_db=" + psnr_text(res.psnr_db) + "\n";
            std::fputs(report.c_str(), stdout);
            if (!s_report.empty()) {
                save_text(s_report, report);
            }
            return 0;
        }

        if (app.got_subcommand(verify_cmd)) {
            const fpa::Image img = fpa::read_image(v_in);
            const fpa::SecretKey key = load_key(v_key);
            const fpa::VerificationReport rep = fpa::verify(img, key);
            if (!v_map.empty()) {
                fpa::render_tamper_map(rep, v_map);
            }
            std::string report;
            report += std::string("authentic=") + (rep.authentic ? "1" : "0") + "\n";
            report += "suspicious_count=" + std::to_string(rep.suspicious_count) + "\n";
            for (const fpa::HollowRegion& hr : rep.hollow_regions) {
                report += "hollow=" + std::to_string(hr.row) + "," + std::to_string(hr.col) + "," +
                          std::to_string(hr.height) + "," + std::to_string(hr.width) + "\n";
            }
            std::fputs(report.c_str(), stdout);
            if (!v_report.empty()) {
                save_text(v_report, report);
            }
            return rep.authentic ? 0 : 1;
        }

        if (app.got_subcommand(attack_cmd)) {
            const fpa::Image img = fpa::read_image(a_in);
            const fpa::SecretKey key = load_key(a_key);
            fpa::AttackSpec spec = parse_attack_spec(a_spec, a_seed);
            // a collage donor must itself be a fixed point under the key
            if (spec.kind == fpa::AttackKind::collage && spec.donor &&
                !fpa::verify(*spec.donor, key).authentic) {
                spec.donor = fpa::seal(*spec.donor, key).fixed_point;
            }
            const fpa::AttackResult res = fpa::apply_attack(img, spec);
            fpa::write_image(res.attacked, a_out, format_for(a_out));
            if (!a_truth.empty()) {
                fpa::Image mask(res.truth_mask.height(), res.truth_mask.width(), 0);
                for (int r = 0; r < mask.height(); ++r) {
                    for (int c = 0; c < mask.width(); ++c) {
                        mask.at(r, c) = res.truth_mask.at(r, c) ? 255 : 0;
                    }
                }
                fpa::write_image(mask, a_truth, format_for(a_truth));
            }
            return 0;
        }

        if (app.got_subcommand(exp_cmd)) {
            const fpa::Image sealed = fpa::read_image(e_in);
            const fpa::SecretKey key = load_key(e_key);
            std::vector<fpa::AttackSpec> specs;
            if (e_suite == "fragility") {
                specs = fragility_suite(sealed, 1);
            } else if (e_suite == "localization") {
                specs = localization_suite(sealed, key, 1);
            } else {
                throw UsageError("unknown suite '" + e_suite + "', expected fragility or localization");
            }
            const fpa::ExperimentReport rep = fpa::run_experiment(sealed, key, specs);
            std::fputs(rep.to_text().c_str(), stdout);
            save_text(e_out, rep.to_text());
            return 0;
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const fpa::NonConvergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        std::fprintf(stderr, "pixel changes per iteration:");
        for (const long n : e.pixel_changes()) {
            std::fprintf(stderr, " %ld", n);
        }
        std::fprintf(stderr, "\n");
        return 3;
    } catch (const fpa::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
