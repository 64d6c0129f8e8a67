#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "intentcl/checkpoint.hpp"
#include "intentcl/errors.hpp"

using namespace intentcl;
namespace fs = std::filesystem;

namespace {

fs::path temp(const std::string& name) {
    auto dir = fs::temp_directory_path() / "intentcl_test_checkpoint";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& bytes) { std::ofstream(p, std::ios::binary) << bytes; }

Vocabulary small_vocab() {
    Vocabulary v;
    for (const char* w : {"card", "arrival", "caf\xc3\xa9"}) v.add(w);
    return v;
}

}  // namespace

TEST_CASE("round trip with and without attention") {
    auto vocab = small_vocab();
    for (bool attention : {false, true}) {
        auto params = init_params<double>(ModelShape::make(vocab.size(), 4, 5, 3, 3, attention), 7);
        auto path = temp(attention ? "att.ckpt" : "plain.ckpt");
        save_checkpoint(params, vocab, path);
        auto back = load_checkpoint(path);
        CHECK(back.params == params);
        CHECK(back.vocab == vocab);
        CHECK(back.params.shape() == params.shape());
        CHECK_NOTHROW(load_checkpoint(path, params.shape()));

        // Saving the loaded state reproduces the file byte for byte.
        auto again = temp("again.ckpt");
        save_checkpoint(back.params, back.vocab, again);
        CHECK(slurp(again) == slurp(path));
    }
}

TEST_CASE("header layout") {
    auto vocab = small_vocab();
    auto params = init_params<double>(ModelShape::make(vocab.size(), 4, 5, 3), 7);
    auto path = temp("layout.ckpt");
    save_checkpoint(params, vocab, path);
    auto bytes = slurp(path);
    CHECK(bytes.substr(0, 8) == std::string("ICLCKPT\0", 8));
    CHECK(static_cast<unsigned char>(bytes[8]) == kCheckpointVersion);
    // Parameters are 8 bytes each; the rest is header, vocab and checksum.
    const std::size_t header = 8 + 4 + 4 + 8 + 8 + 4 + 2 * 8;
    std::size_t vocab_bytes = 0;
    for (const auto& t : vocab.tokens()) vocab_bytes += 4 + t.size();
    CHECK(bytes.size() == header + vocab_bytes + 8 * static_cast<std::size_t>(params.num_parameters()) + 8);
}

TEST_CASE("corruption is detected") {
    auto vocab = small_vocab();
    auto params = init_params<double>(ModelShape::make(vocab.size(), 4, 5, 3), 7);
    auto path = temp("good.ckpt");
    save_checkpoint(params, vocab, path);
    const auto bytes = slurp(path);

    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    spit(temp("magic.ckpt"), bad_magic);
    CHECK_THROWS_AS(load_checkpoint(temp("magic.ckpt")), VersionError);

    auto bad_version = bytes;
    bad_version[8] = 9;
    spit(temp("version.ckpt"), bad_version);
    CHECK_THROWS_AS(load_checkpoint(temp("version.ckpt")), VersionError);

    spit(temp("short.ckpt"), bytes.substr(0, bytes.size() - 20));
    CHECK_THROWS_AS(load_checkpoint(temp("short.ckpt")), DataError);

    spit(temp("long.ckpt"), bytes + "xx");
    CHECK_THROWS_AS(load_checkpoint(temp("long.ckpt")), DataError);

    auto flipped = bytes;
    flipped[bytes.size() / 2] ^= 0x40;
    spit(temp("flip.ckpt"), flipped);
    CHECK_THROWS_AS(load_checkpoint(temp("flip.ckpt")), DataError);

    CHECK_THROWS_AS(load_checkpoint(temp("does-not-exist.ckpt")), DataError);
}

TEST_CASE("dimension mismatches") {
    auto vocab = small_vocab();
    auto params = init_params<double>(ModelShape::make(vocab.size(), 4, 5, 3), 7);
    auto path = temp("dims.ckpt");
    save_checkpoint(params, vocab, path);
    CHECK_THROWS_AS(load_checkpoint(path, ModelShape::make(vocab.size(), 8, 5, 3)), DimensionError);
    CHECK_THROWS_AS(load_checkpoint(path, ModelShape::make(vocab.size(), 4, 5, 3, 2, true)), DimensionError);

    auto bigger = init_params<double>(ModelShape::make(vocab.size() + 1, 4, 5, 3), 7);
    CHECK_THROWS_AS(save_checkpoint(bigger, vocab, temp("never.ckpt")), DimensionError);
}
