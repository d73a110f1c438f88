#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "amrc/huffman.hpp"

using namespace amrc;

namespace {

std::vector<uint32_t> roundtrip(const std::vector<uint32_t>& symbols, uint32_t alphabet) {
    std::vector<uint64_t> hist(alphabet, 0);
    for (uint32_t s : symbols) ++hist[s];
    HuffmanTable table = huffman_build(hist);

    std::vector<uint8_t> bytes;
    serialize_table(table, bytes);
    BitWriter bw;
    huffman_encode(table, symbols, bw);
    uint64_t nbits = bw.bit_count();
    auto bits = bw.finish();
    bytes.insert(bytes.end(), bits.begin(), bits.end());

    ByteReader br(bytes);
    HuffmanTable parsed = parse_table(br);
    BitReader rd(br.take(br.remaining()), nbits);
    return huffman_decode(parsed, rd, symbols.size());
}

}  // namespace

TEST_CASE("two equal symbols get length-1 codes") {
    std::vector<uint64_t> hist{1, 1};
    auto t = huffman_build(hist);
    CHECK(t.lengths[0] == 1);
    CHECK(t.lengths[1] == 1);
}

TEST_CASE("{a:3,b:1,c:1} gives lengths {1,2,2}") {
    std::vector<uint64_t> hist{3, 1, 1};
    auto t = huffman_build(hist);
    CHECK(t.lengths[0] == 1);
    CHECK(t.lengths[1] == 2);
    CHECK(t.lengths[2] == 2);
}

TEST_CASE("single-symbol alphabet uses a 1-bit code") {
    std::vector<uint64_t> hist{0, 0, 5};
    auto t = huffman_build(hist);
    CHECK(t.lengths[2] == 1);
    std::vector<uint32_t> symbols(17, 2);
    CHECK(roundtrip(symbols, 3) == symbols);
}

TEST_CASE("deterministic: ties broken by symbol value") {
    std::vector<uint64_t> hist{2, 2, 2, 2};
    auto a = huffman_build(hist);
    auto b = huffman_build(hist);
    CHECK(a.lengths == b.lengths);
    CHECK(a.codes == b.codes);
    // canonical: codes strictly increase over (length, symbol) order
    for (int s = 0; s < 3; ++s) CHECK(a.codes[s] < a.codes[s + 1]);
}

TEST_CASE("round trip on random streams up to 1e5 symbols") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 4; ++iter) {
        uint32_t alphabet = 16 + static_cast<uint32_t>(rng() % 4000);
        size_t n = 1 + static_cast<size_t>(rng() % 100000);
        std::vector<uint32_t> symbols(n);
        // skewed distribution: mix a hot symbol with a wide tail
        for (auto& s : symbols) {
            s = (rng() % 4 == 0) ? static_cast<uint32_t>(rng() % alphabet) : alphabet / 2;
        }
        CHECK(roundtrip(symbols, alphabet) == symbols);
    }
}

TEST_CASE("corrupt bitstream raises a decode error with a bit offset") {
    std::vector<uint64_t> hist{7, 1, 1, 1};
    auto t = huffman_build(hist);
    std::vector<uint32_t> symbols{0, 1, 2, 3, 0, 0};
    BitWriter bw;
    huffman_encode(t, symbols, bw);
    uint64_t nbits = bw.bit_count();
    auto bytes = bw.finish();

    // truncate: ask for more symbols than the stream holds
    BitReader rd(bytes, nbits);
    CHECK_THROWS_WITH_AS(huffman_decode(t, rd, symbols.size() + 8),
                         doctest::Contains("bit offset"), DataError);
}

TEST_CASE("kraft violation is rejected on load") {
    std::vector<uint8_t> bytes;
    put_scalar<uint32_t>(bytes, 4);  // alphabet
    put_scalar<uint32_t>(bytes, 0);  // first used symbol
    put_scalar<uint32_t>(bytes, 2);  // last used symbol
    for (uint32_t s = 0; s < 3; ++s) {
        put_scalar<uint8_t>(bytes, 1);  // three length-1 codes: kraft sum 1.5
    }
    ByteReader br(bytes);
    CHECK_THROWS_WITH_AS(parse_table(br), doctest::Contains("Kraft"), DataError);
}
