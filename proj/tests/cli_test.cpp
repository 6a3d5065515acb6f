// End-to-end tests of the fpauth binary. The binary path is injected by the
// build as FPA_CLI_PATH.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include <fpa/image_io.hpp>

#include "support/corpus.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = FPA_CLI_PATH;

int run(const std::string& args) {
    const int status = std::system((kCli + " " + args).c_str());
    return WEXITSTATUS(status);
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "fpa_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Cli, KeygenIsReproducibleAndReportsKeyBits) {
    const fs::path dir = work_dir();
    const fs::path k1 = dir / "k1.key";
    const fs::path k2 = dir / "k2.key";
    const fs::path log = dir / "keygen.log";
    ASSERT_EQ(run("keygen --width 512 --height 512 --mods 2 --seed 9 --out " + k1.string() +
                  " > " + log.string()),
              0);
    ASSERT_EQ(run("keygen --width 512 --height 512 --mods 2 --seed 9 --out " + k2.string()), 0);
    EXPECT_EQ(slurp(k1), slurp(k2));
    EXPECT_FALSE(slurp(k1).empty());
    EXPECT_NE(slurp(log).find("key_space_bits=61.64"), std::string::npos);

    ASSERT_EQ(run("keygen --width 512 --height 512 --mods 0 --seed 9 --out " + k1.string() +
                  " > " + log.string()),
              0);
    EXPECT_NE(slurp(log).find("key_space_bits=19.00"), std::string::npos);
}

TEST(Cli, SealVerifyAttackPipeline) {
    const fs::path dir = work_dir();
    const fs::path original = dir / "original.pgm";
    const fs::path key = dir / "pipeline.key";
    const fs::path sealed = dir / "sealed.pgm";
    const fs::path sealed2 = dir / "sealed2.pgm";
    const fs::path attacked = dir / "attacked.pgm";
    const fs::path truth = dir / "truth.pgm";
    const fs::path map = dir / "map.pgm";
    const fs::path report = dir / "report.txt";

    fpa::write_image(corpus::natural_image(64, 64, 321), original.string());
    ASSERT_EQ(run("keygen --width 64 --height 64 --mods 2 --seed 4 --out " + key.string() +
                  " > /dev/null"),
              0);

    // sealing succeeds and is byte-deterministic
    ASSERT_EQ(run("seal --in " + original.string() + " --key " + key.string() + " --out " +
                  sealed.string() + " --report " + report.string() + " > /dev/null"),
              0);
    ASSERT_EQ(run("seal --in " + original.string() + " --key " + key.string() + " --out " +
                  sealed2.string() + " > /dev/null"),
              0);
    EXPECT_EQ(slurp(sealed), slurp(sealed2));
    EXPECT_NE(slurp(report).find("iterations="), std::string::npos);
    EXPECT_NE(slurp(report).find("psnr_db="), std::string::npos);

    // sealing an already sealed image is the identity
    ASSERT_EQ(run("seal --in " + sealed.string() + " --key " + key.string() + " --out " +
                  sealed2.string() + " > /dev/null"),
              0);
    EXPECT_EQ(slurp(sealed), slurp(sealed2));

    // the sealed image verifies, the original does not
    EXPECT_EQ(run("verify --in " + sealed.string() + " --key " + key.string() + " > /dev/null"),
              0);

    // a covered region fails verification and yields a tamper map
    ASSERT_EQ(run("attack --in " + sealed.string() + " --key " + key.string() +
                  " --spec COVER_CONSTANT:region=20:18:24:24,value=224 --seed 5 --out " +
                  attacked.string() + " --truth " + truth.string()),
              0);
    EXPECT_EQ(run("verify --in " + attacked.string() + " --key " + key.string() + " --map " +
                  map.string() + " --report " + report.string() + " > /dev/null"),
              1);
    EXPECT_NE(slurp(report).find("authentic=0"), std::string::npos);
    const fpa::Image truth_img = fpa::read_image(truth.string());
    EXPECT_EQ(truth_img.at(20, 18), 255);
    EXPECT_EQ(truth_img.at(0, 0), 0);
    const fpa::Image map_img = fpa::read_image(map.string());
    long white = 0;
    for (int r = 0; r < 64; ++r) {
        for (int c = 0; c < 64; ++c) {
            white += map_img.at(r, c) == 255;
        }
    }
    EXPECT_GT(white, 0);
}

TEST(Cli, SeededAttacksAreByteReproducible) {
    const fs::path dir = work_dir();
    const fs::path img = dir / "noise.pgm";
    const fs::path key = dir / "noise.key";
    const fs::path out1 = dir / "a1.pgm";
    const fs::path out2 = dir / "a2.pgm";
    fpa::write_image(corpus::random_image(48, 48, 0, 255, 7), img.string());
    ASSERT_EQ(run("keygen --width 48 --height 48 --mods 0 --seed 2 --out " + key.string() +
                  " > /dev/null"),
              0);
    const std::string spec = "SALT_PEPPER_LOCAL:region=8:8:24:24,density=0.1";
    ASSERT_EQ(run("attack --in " + img.string() + " --key " + key.string() + " --spec " + spec +
                  " --seed 11 --out " + out1.string()),
              0);
    ASSERT_EQ(run("attack --in " + img.string() + " --key " + key.string() + " --spec " + spec +
                  " --seed 11 --out " + out2.string()),
              0);
    EXPECT_EQ(slurp(out1), slurp(out2));
}

TEST(Cli, ExperimentSuitesEmitRecords) {
    const fs::path dir = work_dir();
    const fs::path original = dir / "exp.pgm";
    const fs::path key = dir / "exp.key";
    const fs::path sealed = dir / "exp_sealed.pgm";
    const fs::path report = dir / "exp_report.txt";
    fpa::write_image(corpus::natural_image(64, 64, 5150), original.string());
    ASSERT_EQ(run("keygen --width 64 --height 64 --mods 2 --seed 6 --out " + key.string() +
                  " > /dev/null"),
              0);
    ASSERT_EQ(run("seal --in " + original.string() + " --key " + key.string() + " --out " +
                  sealed.string() + " > /dev/null"),
              0);

    ASSERT_EQ(run("experiment --in " + sealed.string() + " --key " + key.string() +
                  " --suite fragility --out " + report.string() + " > /dev/null"),
              0);
    std::string text = slurp(report);
    EXPECT_NE(text.find("kind=REWRITE_OTHER_KEY"), std::string::npos);
    EXPECT_NE(text.find("kind=FLIP_H"), std::string::npos);
    EXPECT_NE(text.find("kind=QUANT_NOISE"), std::string::npos);

    ASSERT_EQ(run("experiment --in " + sealed.string() + " --key " + key.string() +
                  " --suite localization --out " + report.string() + " > /dev/null"),
              0);
    text = slurp(report);
    EXPECT_NE(text.find("kind=SALT_PEPPER_LOCAL"), std::string::npos);
    EXPECT_NE(text.find("kind=COLLAGE"), std::string::npos);
    EXPECT_NE(text.find("kind=LOGO_OVERLAY"), std::string::npos);
    EXPECT_NE(text.find("recall="), std::string::npos);
}

TEST(Cli, ExitCodes) {
    const fs::path dir = work_dir();
    // usage errors
    EXPECT_EQ(run("keygen --width 64 2> /dev/null"), 2);
    EXPECT_EQ(run("no_such_command 2> /dev/null"), 2);
    const fs::path img = dir / "codes.pgm";
    const fs::path key = dir / "codes.key";
    fpa::write_image(corpus::random_image(32, 32, 0, 255, 8), img.string());
    ASSERT_EQ(run("keygen --width 32 --height 32 --mods 0 --seed 3 --out " + key.string() +
                  " > /dev/null"),
              0);
    EXPECT_EQ(run("attack --in " + img.string() + " --key " + key.string() +
                  " --spec NO_SUCH_ATTACK --seed 1 --out " + (dir / "x.pgm").string() +
                  " 2> /dev/null"),
              2);
    EXPECT_EQ(run("experiment --in " + img.string() + " --key " + key.string() +
                  " --suite nonsense --out " + (dir / "x.txt").string() + " 2> /dev/null"),
              2);
    // processing errors
    EXPECT_EQ(run("seal --in " + (dir / "missing.pgm").string() + " --key " + key.string() +
                  " --out " + (dir / "x.pgm").string() + " 2> /dev/null"),
              3);
    const fs::path bad_key = dir / "bad.key";
    std::ofstream(bad_key) << "not a key\n";
    EXPECT_EQ(run("seal --in " + img.string() + " --key " + bad_key.string() + " --out " +
                  (dir / "x.pgm").string() + " 2> /dev/null"),
              3);
}
