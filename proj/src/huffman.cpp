#include "amrc/huffman.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace amrc {

namespace {

constexpr int kMaxLen = 60;

struct Node {
    uint64_t weight;
    uint64_t order;  // creation order; makes tree shape deterministic
    int left, right; // -1 for leaves
    uint32_t symbol;
};

void assign_depths(const std::vector<Node>& nodes, int idx, int depth, std::vector<uint8_t>& lengths) {
    const Node& n = nodes[static_cast<size_t>(idx)];
    if (n.left < 0) {
        lengths[n.symbol] = static_cast<uint8_t>(std::max(depth, 1));
        return;
    }
    assign_depths(nodes, n.left, depth + 1, lengths);
    assign_depths(nodes, n.right, depth + 1, lengths);
}

void build_codes(HuffmanTable& t) {
    // canonical assignment: sort by (length, symbol), codes count upward
    std::vector<uint32_t> syms;
    for (uint32_t s = 0; s < t.alphabet_size; ++s)
        if (t.lengths[s] > 0) syms.push_back(s);
    std::sort(syms.begin(), syms.end(), [&](uint32_t a, uint32_t b) {
        if (t.lengths[a] != t.lengths[b]) return t.lengths[a] < t.lengths[b];
        return a < b;
    });
    t.codes.assign(t.alphabet_size, 0);
    uint64_t code = 0;
    int prev_len = 0;
    for (uint32_t s : syms) {
        int len = t.lengths[s];
        code <<= (len - prev_len);
        t.codes[s] = code;
        ++code;
        prev_len = len;
    }
}

void check_kraft(const HuffmanTable& t) {
    // sum of 2^-len over used symbols must not exceed 1
    uint64_t sum = 0;  // in units of 2^-kMaxLen
    for (uint32_t s = 0; s < t.alphabet_size; ++s) {
        int len = t.lengths[s];
        if (len == 0) continue;
        if (len > kMaxLen) throw DataError("huffman table: code length " + std::to_string(len) + " too large");
        sum += uint64_t{1} << (kMaxLen - len);
        if (sum > (uint64_t{1} << kMaxLen)) throw DataError("huffman table: Kraft inequality violated");
    }
    if (sum == 0) throw DataError("huffman table: no symbols");
}

}  // namespace

HuffmanTable huffman_build(std::span<const uint64_t> histogram) {
    HuffmanTable t;
    t.alphabet_size = static_cast<uint32_t>(histogram.size());
    t.lengths.assign(t.alphabet_size, 0);

    std::vector<Node> nodes;
    for (uint32_t s = 0; s < t.alphabet_size; ++s) {
        if (histogram[s] > 0) {
            nodes.push_back({histogram[s], nodes.size(), -1, -1, s});
        }
    }
    if (nodes.empty()) throw DataError("huffman_build: empty histogram");

    if (nodes.size() == 1) {
        t.lengths[nodes[0].symbol] = 1;
        build_codes(t);
        return t;
    }

    auto cmp = [&](int a, int b) {
        const Node& na = nodes[static_cast<size_t>(a)];
        const Node& nb = nodes[static_cast<size_t>(b)];
        if (na.weight != nb.weight) return na.weight > nb.weight;
        return na.order > nb.order;
    };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> pq(cmp);
    for (size_t i = 0; i < nodes.size(); ++i) pq.push(static_cast<int>(i));
    while (pq.size() > 1) {
        int a = pq.top();
        pq.pop();
        int b = pq.top();
        pq.pop();
        nodes.push_back({nodes[static_cast<size_t>(a)].weight + nodes[static_cast<size_t>(b)].weight,
                         nodes.size(), a, b, 0});
        pq.push(static_cast<int>(nodes.size() - 1));
    }
    assign_depths(nodes, pq.top(), 0, t.lengths);
    build_codes(t);
    return t;
}

void huffman_encode(const HuffmanTable& table, std::span<const uint32_t> symbols, BitWriter& bw) {
    for (uint32_t s : symbols) {
        if (s >= table.alphabet_size || table.lengths[s] == 0) {
            throw DataError("huffman_encode: symbol " + std::to_string(s) + " not in table");
        }
        bw.put(table.codes[s], table.lengths[s]);
    }
}

std::vector<uint32_t> huffman_decode(const HuffmanTable& table, BitReader& br, size_t count) {
    // canonical decode: per length, the first code value and the index of its
    // first symbol in (length, symbol) order
    std::vector<uint32_t> syms;
    for (uint32_t s = 0; s < table.alphabet_size; ++s)
        if (table.lengths[s] > 0) syms.push_back(s);
    std::sort(syms.begin(), syms.end(), [&](uint32_t a, uint32_t b) {
        if (table.lengths[a] != table.lengths[b]) return table.lengths[a] < table.lengths[b];
        return a < b;
    });
    int max_len = 0;
    for (uint32_t s : syms) max_len = std::max<int>(max_len, table.lengths[s]);

    std::vector<uint64_t> first_code(static_cast<size_t>(max_len) + 2, 0);
    std::vector<uint64_t> first_sym(static_cast<size_t>(max_len) + 2, 0);
    std::vector<uint64_t> count_len(static_cast<size_t>(max_len) + 2, 0);
    for (uint32_t s : syms) ++count_len[table.lengths[s]];
    {
        uint64_t code = 0, sym_idx = 0;
        for (int len = 1; len <= max_len; ++len) {
            first_code[static_cast<size_t>(len)] = code;
            first_sym[static_cast<size_t>(len)] = sym_idx;
            code = (code + count_len[static_cast<size_t>(len)]) << 1;
            sym_idx += count_len[static_cast<size_t>(len)];
        }
    }

    std::vector<uint32_t> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        uint64_t code = 0;
        int len = 0;
        while (true) {
            code = (code << 1) | br.read_bit();
            ++len;
            if (len > max_len) {
                throw DataError("huffman_decode: corrupt stream at bit offset " +
                                std::to_string(br.offset()));
            }
            uint64_t cl = count_len[static_cast<size_t>(len)];
            if (cl > 0 && code >= first_code[static_cast<size_t>(len)] &&
                code < first_code[static_cast<size_t>(len)] + cl) {
                out.push_back(syms[static_cast<size_t>(
                    first_sym[static_cast<size_t>(len)] + (code - first_code[static_cast<size_t>(len)]))]);
                break;
            }
        }
    }
    return out;
}

void serialize_table(const HuffmanTable& table, std::vector<uint8_t>& out) {
    // dense length run over [first, last]; zero means unused
    uint32_t first = 0, last = 0;
    bool any = false;
    for (uint32_t s = 0; s < table.alphabet_size; ++s) {
        if (table.lengths[s] > 0) {
            if (!any) first = s;
            last = s;
            any = true;
        }
    }
    if (!any) throw DataError("serialize_table: empty table");
    put_scalar<uint32_t>(out, table.alphabet_size);
    put_scalar<uint32_t>(out, first);
    put_scalar<uint32_t>(out, last);
    for (uint32_t s = first; s <= last; ++s) put_scalar<uint8_t>(out, table.lengths[s]);
}

HuffmanTable parse_table(ByteReader& br) {
    HuffmanTable t;
    t.alphabet_size = br.get<uint32_t>();
    if (t.alphabet_size == 0 || t.alphabet_size > (1u << 24)) {
        throw DataError("huffman table: bad alphabet size " + std::to_string(t.alphabet_size));
    }
    auto first = br.get<uint32_t>();
    auto last = br.get<uint32_t>();
    if (first > last || last >= t.alphabet_size) throw DataError("huffman table: bad symbol range");
    t.lengths.assign(t.alphabet_size, 0);
    bool any = false;
    for (uint32_t s = first; s <= last; ++s) {
        uint8_t len = br.get<uint8_t>();
        t.lengths[s] = len;
        any = any || len > 0;
    }
    if (!any) throw DataError("huffman table: no symbols");
    check_kraft(t);
    build_codes(t);
    return t;
}

}  // namespace amrc
