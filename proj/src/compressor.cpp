#include "amrc/compressor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "amrc/bitio.hpp"
#include "amrc/huffman.hpp"
#include "amrc/lossless.hpp"
#include "amrc/predictors.hpp"
#include "amrc/quantize.hpp"

namespace amrc {

namespace {

constexpr uint32_t kMagic = 0x564C5A53u;  // "SZLV"
constexpr uint16_t kVersion = 1;

struct Region {
    Int3 origin;
    Int3 size;
};

std::vector<Region> unit_regions(Int3 dims, int U) {
    std::vector<Region> rs;
    for (int64_t z = 0; z < dims.z; z += U)
        for (int64_t y = 0; y < dims.y; y += U)
            for (int64_t x = 0; x < dims.x; x += U) {
                rs.push_back({{x, y, z},
                              {std::min<int64_t>(U, dims.x - x), std::min<int64_t>(U, dims.y - y),
                               std::min<int64_t>(U, dims.z - z)}});
            }
    return rs;
}

std::vector<Region> sz_blocks(const Region& r, int B) {
    std::vector<Region> bs;
    for (int64_t z = 0; z < r.size.z; z += B)
        for (int64_t y = 0; y < r.size.y; y += B)
            for (int64_t x = 0; x < r.size.x; x += B) {
                bs.push_back({{x, y, z},
                              {std::min<int64_t>(B, r.size.x - x), std::min<int64_t>(B, r.size.y - y),
                               std::min<int64_t>(B, r.size.z - z)}});
            }
    return bs;
}

struct Outlier {
    uint64_t pos;
    uint64_t bits;
};

void write_outliers(std::vector<uint8_t>& out, const std::vector<Outlier>& os) {
    put_scalar<uint64_t>(out, os.size());
    for (const auto& o : os) {
        put_scalar<uint64_t>(out, o.pos);
        put_scalar<uint64_t>(out, o.bits);
    }
}

std::vector<Outlier> read_outliers(ByteReader& br) {
    auto count = br.get<uint64_t>();
    if (count > (uint64_t{1} << 36)) throw DataError("outlier section: implausible count");
    std::vector<Outlier> os(count);
    uint64_t prev = 0;
    for (uint64_t i = 0; i < count; ++i) {
        os[i].pos = br.get<uint64_t>();
        os[i].bits = br.get<uint64_t>();
        if (i > 0 && os[i].pos <= prev) throw DataError("outlier section: positions not increasing");
        prev = os[i].pos;
    }
    return os;
}

// Sequential outlier consumption keyed by emission position.
class OutlierCursor {
public:
    explicit OutlierCursor(const std::vector<Outlier>& os) : os_(os) {}

    double take(uint64_t pos) {
        if (idx_ >= os_.size() || os_[idx_].pos != pos) {
            throw DataError("outlier section: missing entry for position " + std::to_string(pos));
        }
        return std::bit_cast<double>(os_[idx_++].bits);
    }

    bool fully_consumed() const { return idx_ == os_.size(); }

private:
    const std::vector<Outlier>& os_;
    size_t idx_ = 0;
};

void write_bitstream(std::vector<uint8_t>& out, const HuffmanTable& table,
                     std::span<const uint32_t> symbols) {
    serialize_table(table, out);
    BitWriter bw;
    huffman_encode(table, symbols, bw);
    uint64_t nbits = bw.bit_count();
    auto bytes = bw.finish();
    put_scalar<uint64_t>(out, symbols.size());
    put_scalar<uint64_t>(out, nbits);
    out.insert(out.end(), bytes.begin(), bytes.end());
}

std::vector<uint32_t> read_bitstream(ByteReader& br, uint64_t expect_symbols) {
    HuffmanTable table = parse_table(br);
    auto n_symbols = br.get<uint64_t>();
    auto n_bits = br.get<uint64_t>();
    if (n_symbols != expect_symbols) {
        throw DataError("code stream: symbol count " + std::to_string(n_symbols) +
                        " does not match expected " + std::to_string(expect_symbols));
    }
    if (n_bits > 64 * n_symbols + 64) throw DataError("code stream: implausible bit count");
    auto bytes = br.take(static_cast<size_t>((n_bits + 7) / 8));
    BitReader bits(bytes, n_bits);
    return huffman_decode(table, bits, static_cast<size_t>(n_symbols));
}

HuffmanTable table_for(std::span<const uint32_t> symbols) {
    if (symbols.empty()) {  // fully anchored degenerate volume
        uint64_t one = 1;
        return huffman_build(std::span<const uint64_t>(&one, 1));
    }
    uint32_t max_sym = 0;
    for (uint32_t s : symbols) max_sym = std::max(max_sym, s);
    std::vector<uint64_t> hist(static_cast<size_t>(max_sym) + 1, 0);
    for (uint32_t s : symbols) ++hist[s];
    return huffman_build(hist);
}

struct StreamHeader {
    Algorithm algorithm;
    Encoding encoding;
    Codec codec;
    double effective_eb;
    uint32_t B;
    uint32_t U;
    uint32_t block_count;
    Int3 shape;
    uint32_t capacity;
};

void write_header(std::vector<uint8_t>& out, const StreamHeader& h) {
    put_scalar<uint32_t>(out, kMagic);
    put_scalar<uint16_t>(out, kVersion);
    put_scalar<uint8_t>(out, static_cast<uint8_t>(h.algorithm));
    put_scalar<uint8_t>(out, static_cast<uint8_t>(h.encoding));
    put_scalar<uint8_t>(out, static_cast<uint8_t>(h.codec));
    put_scalar<double>(out, h.effective_eb);
    put_scalar<uint32_t>(out, h.B);
    put_scalar<uint32_t>(out, h.U);
    put_scalar<uint32_t>(out, h.block_count);
    put_scalar<uint64_t>(out, static_cast<uint64_t>(h.shape.x));
    put_scalar<uint64_t>(out, static_cast<uint64_t>(h.shape.y));
    put_scalar<uint64_t>(out, static_cast<uint64_t>(h.shape.z));
    put_scalar<uint32_t>(out, h.capacity);
}

StreamHeader read_header(ByteReader& br) {
    if (br.get<uint32_t>() != kMagic) throw DataError("stream: bad magic");
    if (br.get<uint16_t>() != kVersion) throw DataError("stream: unsupported version");
    StreamHeader h{};
    h.algorithm = static_cast<Algorithm>(br.get<uint8_t>());
    h.encoding = static_cast<Encoding>(br.get<uint8_t>());
    h.codec = static_cast<Codec>(br.get<uint8_t>());
    h.effective_eb = br.get<double>();
    h.B = br.get<uint32_t>();
    h.U = br.get<uint32_t>();
    h.block_count = br.get<uint32_t>();
    h.shape.x = static_cast<int64_t>(br.get<uint64_t>());
    h.shape.y = static_cast<int64_t>(br.get<uint64_t>());
    h.shape.z = static_cast<int64_t>(br.get<uint64_t>());
    h.capacity = br.get<uint32_t>();
    if (h.shape.x <= 0 || h.shape.y <= 0 || h.shape.z <= 0 ||
        h.shape.product() > (int64_t{1} << 36)) {
        throw DataError("stream: implausible shape " + h.shape.str());
    }
    if (!(h.effective_eb > 0) || !std::isfinite(h.effective_eb)) {
        throw DataError("stream: bad error bound");
    }
    if (h.capacity < 4 || (h.capacity & (h.capacity - 1)) != 0) {
        throw DataError("stream: bad quantizer capacity");
    }
    return h;
}

std::pair<double, double> minmax_of(std::span<const double> data) {
    double lo = data[0], hi = data[0];
    for (double v : data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

void pack_flags(std::vector<uint8_t>& out, const std::vector<uint8_t>& flags) {
    put_scalar<uint64_t>(out, flags.size());
    uint8_t acc = 0;
    int fill = 0;
    for (uint8_t f : flags) {
        acc = static_cast<uint8_t>((acc << 1) | (f & 1));
        if (++fill == 8) {
            out.push_back(acc);
            acc = 0;
            fill = 0;
        }
    }
    if (fill > 0) out.push_back(static_cast<uint8_t>(acc << (8 - fill)));
}

std::vector<uint8_t> unpack_flags(ByteReader& br) {
    auto count = br.get<uint64_t>();
    if (count > (uint64_t{1} << 32)) throw DataError("flag section: implausible count");
    auto bytes = br.take(static_cast<size_t>((count + 7) / 8));
    std::vector<uint8_t> flags(count);
    for (uint64_t i = 0; i < count; ++i) {
        flags[i] = (bytes[static_cast<size_t>(i >> 3)] >> (7 - (i & 7))) & 1;
    }
    return flags;
}

// ---------------------------------------------------------------------------
// LR: Lorenzo/regression block compressor
// ---------------------------------------------------------------------------

struct LrScratch {
    std::vector<uint32_t> symbols;      // per region: coeff codes then point codes, per SZ block
    std::vector<uint8_t> flags;         // global
    std::vector<Outlier> point_outliers;
    std::vector<Outlier> coeff_outliers;
    uint64_t point_pos = 0;
    uint64_t coeff_pos = 0;
};

void lr_encode_region(std::span<const double> data, Int3 dims, const Region& region, int B,
                      Quantizer& q, Quantizer& qc, LrScratch& s) {
    PaddedVolume recon(region.size);
    RegCoeffs prev{};  // dequantized chain, restarts per region
    const int64_t row = dims.x;
    const int64_t slab = dims.x * dims.y;
    const double* base =
        data.data() + region.origin.z * slab + region.origin.y * row + region.origin.x;

    for (const Region& blk : sz_blocks(region, B)) {
        const double* bdata = base + blk.origin.z * slab + blk.origin.y * row + blk.origin.x;
        RegCoeffs fit = regression_fit(bdata, blk.size, row, slab);

        // tentative coefficient quantization against the current chain
        RegCoeffs deq;
        uint32_t codes[4];
        double raw[4] = {fit.a, fit.b, fit.c, fit.d};
        double prev_arr[4] = {prev.a, prev.b, prev.c, prev.d};
        double deq_arr[4];
        for (int j = 0; j < 4; ++j) {
            double v = raw[j];
            codes[j] = qc.quantize(v, prev_arr[j]);
            deq_arr[j] = v;  // reconstructed (or exact, when the code is 0)
        }
        deq = {deq_arr[0], deq_arr[1], deq_arr[2], deq_arr[3]};

        auto est = estimate_predictors(bdata, blk.size, row, slab, recon, blk.origin, deq);
        bool use_reg = est.choice() == Predictor::Regression;
        s.flags.push_back(use_reg ? 1 : 0);

        if (use_reg) {
            for (int j = 0; j < 4; ++j) {
                s.symbols.push_back(codes[j]);
                if (codes[j] == 0) {
                    s.coeff_outliers.push_back({s.coeff_pos, std::bit_cast<uint64_t>(deq_arr[j])});
                }
                ++s.coeff_pos;
            }
            prev = deq;
        }

        for (int64_t z = 0; z < blk.size.z; ++z)
            for (int64_t y = 0; y < blk.size.y; ++y)
                for (int64_t x = 0; x < blk.size.x; ++x) {
                    Int3 p = blk.origin + Int3{x, y, z};
                    double val = bdata[z * slab + y * row + x];
                    double pred = use_reg ? regression_predict(deq, x, y, z)
                                          : lorenzo_predict(recon, p.x, p.y, p.z);
                    uint32_t code = q.quantize(val, pred);
                    s.symbols.push_back(code);
                    if (code == 0) {
                        s.point_outliers.push_back({s.point_pos, std::bit_cast<uint64_t>(val)});
                    }
                    recon.set(p.x, p.y, p.z, val);
                    ++s.point_pos;
                }
    }
}

void lr_decode_region(std::span<const uint32_t> symbols, size_t& sym_idx,
                      std::span<const uint8_t> flags, size_t& flag_idx, const Region& region,
                      int B, const Quantizer& q, const Quantizer& qc, OutlierCursor& points,
                      OutlierCursor& coeffs, uint64_t& point_pos, uint64_t& coeff_pos,
                      std::span<double> out, Int3 dims) {
    PaddedVolume recon(region.size);
    RegCoeffs prev{};

    for (const Region& blk : sz_blocks(region, B)) {
        if (flag_idx >= flags.size()) throw DataError("stream: flag section shorter than block list");
        bool use_reg = flags[flag_idx++] != 0;
        RegCoeffs deq = prev;
        if (use_reg) {
            double prev_arr[4] = {prev.a, prev.b, prev.c, prev.d};
            double deq_arr[4];
            for (int j = 0; j < 4; ++j) {
                if (sym_idx >= symbols.size()) throw DataError("stream: code stream underrun");
                uint32_t code = symbols[sym_idx++];
                deq_arr[j] = (code == 0) ? coeffs.take(coeff_pos) : qc.recover(prev_arr[j], code);
                ++coeff_pos;
            }
            deq = {deq_arr[0], deq_arr[1], deq_arr[2], deq_arr[3]};
            prev = deq;
        }
        for (int64_t z = 0; z < blk.size.z; ++z)
            for (int64_t y = 0; y < blk.size.y; ++y)
                for (int64_t x = 0; x < blk.size.x; ++x) {
                    Int3 p = blk.origin + Int3{x, y, z};
                    if (sym_idx >= symbols.size()) throw DataError("stream: code stream underrun");
                    uint32_t code = symbols[sym_idx++];
                    double val;
                    if (code == 0) {
                        val = points.take(point_pos);
                    } else {
                        double pred = use_reg ? regression_predict(deq, x, y, z)
                                              : lorenzo_predict(recon, p.x, p.y, p.z);
                        val = q.recover(pred, code);
                    }
                    recon.set(p.x, p.y, p.z, val);
                    Int3 g = region.origin + p;
                    out[static_cast<size_t>((g.z * dims.y + g.y) * dims.x + g.x)] = val;
                    ++point_pos;
                }
    }
}

std::vector<uint8_t> compress_lr(std::span<const double> data, Int3 dims,
                                 const CompressorConfig& cfg, double eff_eb) {
    const int B = cfg.sz_block_size;
    const int U = cfg.unit_block_size;
    Quantizer q(eff_eb, cfg.quant_capacity);
    Quantizer qc(eff_eb / (2.0 * B), cfg.quant_capacity);

    std::vector<Region> regions;
    if (cfg.encoding == Encoding::LinearMerge) {
        regions.push_back({{0, 0, 0}, dims});
    } else {
        regions = unit_regions(dims, U);
    }

    LrScratch s;
    std::vector<size_t> region_symbol_start{0};
    for (const Region& r : regions) {
        lr_encode_region(data, dims, r, B, q, qc, s);
        region_symbol_start.push_back(s.symbols.size());
    }

    std::vector<uint8_t> out;
    write_header(out, {cfg.algorithm, cfg.encoding, cfg.codec, eff_eb, static_cast<uint32_t>(B),
                       static_cast<uint32_t>(U), static_cast<uint32_t>(regions.size()), dims,
                       cfg.quant_capacity});
    pack_flags(out, s.flags);
    if (cfg.encoding == Encoding::PerBlock) {
        for (size_t r = 0; r < regions.size(); ++r) {
            std::span<const uint32_t> span(s.symbols.data() + region_symbol_start[r],
                                           region_symbol_start[r + 1] - region_symbol_start[r]);
            write_bitstream(out, table_for(span), span);
        }
    } else {
        write_bitstream(out, table_for(s.symbols), s.symbols);
    }
    write_outliers(out, s.point_outliers);
    write_outliers(out, s.coeff_outliers);
    return out;
}

void decompress_lr(ByteReader& br, const StreamHeader& h, std::vector<double>& out) {
    const int B = static_cast<int>(h.B);
    const int U = static_cast<int>(h.U);
    if (B != 4 && B != 6) throw DataError("stream: bad block size " + std::to_string(h.B));
    if (U < 4) throw DataError("stream: bad unit block size " + std::to_string(h.U));
    Quantizer q(h.effective_eb, h.capacity);
    Quantizer qc(h.effective_eb / (2.0 * B), h.capacity);

    std::vector<Region> regions;
    if (h.encoding == Encoding::LinearMerge) {
        regions.push_back({{0, 0, 0}, h.shape});
    } else {
        regions = unit_regions(h.shape, U);
    }
    if (regions.size() != h.block_count) {
        throw DataError("stream: block count " + std::to_string(h.block_count) +
                        " does not match shape");
    }

    auto flags = unpack_flags(br);

    // expected symbol counts per region, derivable from the flags
    std::vector<uint64_t> expect(regions.size());
    {
        size_t fi = 0;
        for (size_t r = 0; r < regions.size(); ++r) {
            uint64_t n = static_cast<uint64_t>(regions[r].size.product());
            for (const Region& blk : sz_blocks(regions[r], B)) {
                (void)blk;
                if (fi >= flags.size()) throw DataError("stream: flag section shorter than block list");
                if (flags[fi++]) n += 4;
            }
            expect[r] = n;
        }
        if (fi != flags.size()) throw DataError("stream: flag section longer than block list");
    }

    std::vector<uint32_t> symbols;
    std::vector<size_t> region_start{0};
    if (h.encoding == Encoding::PerBlock) {
        for (size_t r = 0; r < regions.size(); ++r) {
            auto part = read_bitstream(br, expect[r]);
            symbols.insert(symbols.end(), part.begin(), part.end());
            region_start.push_back(symbols.size());
        }
    } else {
        uint64_t total = 0;
        for (uint64_t e : expect) total += e;
        symbols = read_bitstream(br, total);
        for (size_t r = 0; r < regions.size(); ++r) {
            region_start.push_back(region_start.back() + static_cast<size_t>(expect[r]));
        }
    }

    auto point_outliers = read_outliers(br);
    auto coeff_outliers = read_outliers(br);
    OutlierCursor points(point_outliers), coeffs(coeff_outliers);

    out.assign(static_cast<size_t>(h.shape.product()), 0.0);
    size_t sym_idx = 0, flag_idx = 0;
    uint64_t point_pos = 0, coeff_pos = 0;
    for (size_t r = 0; r < regions.size(); ++r) {
        lr_decode_region(symbols, sym_idx, flags, flag_idx, regions[r], B, q, qc, points, coeffs,
                         point_pos, coeff_pos, out, h.shape);
    }
    if (sym_idx != symbols.size()) throw DataError("stream: trailing symbols");
    if (!points.fully_consumed() || !coeffs.fully_consumed()) {
        throw DataError("stream: unused outlier entries");
    }
}

// ---------------------------------------------------------------------------
// Interp: multilevel cubic interpolation
// ---------------------------------------------------------------------------

int64_t anchor_stride(Int3 dims) {
    int64_t maxdim = std::max({dims.x, dims.y, dims.z});
    int64_t s = static_cast<int64_t>(std::bit_ceil(static_cast<uint64_t>(maxdim)));
    return std::min<int64_t>(s, 64);
}

int64_t anchor_count(Int3 dims, int64_t stride) {
    return ceil_div(dims.x, stride) * ceil_div(dims.y, stride) * ceil_div(dims.z, stride);
}

// Coarse lattice points are quantized with progressively tighter bounds so
// their errors do not cascade through the level recursion; the finest level
// uses the full bound, and every point stays within it.
double interp_level_eb(double eb, int64_t stride) {
    double scale = 1.0;
    for (int64_t s = stride; s > 2 && scale < 16.0; s /= 2) scale *= 2.0;
    return eb / scale;
}

// Visits every non-anchor point exactly once, coarsest stride first, passes in
// z,y,x order; `visit(index, predicted, stride)` must leave the reconstructed
// value in recon[index] before it is used as a later neighbor.
template <class F>
void interp_sweep(std::span<double> recon, Int3 dims, int64_t top_stride, F&& visit) {
    const int64_t row = dims.x, slab = dims.x * dims.y;
    auto at = [&](int64_t x, int64_t y, int64_t z) { return recon[static_cast<size_t>(z * slab + y * row + x)]; };

    auto predict_1d = [&](Int3 p, int dim, int64_t h) {
        int64_t c = p[dim], n = dims[dim];
        auto sample = [&](int64_t coord) {
            Int3 s = p;
            s[dim] = coord;
            return at(s.x, s.y, s.z);
        };
        if (c + h < n) {
            if (c - 3 * h >= 0 && c + 3 * h < n) {
                return (-sample(c - 3 * h) + 9.0 * sample(c - h) + 9.0 * sample(c + h) -
                        sample(c + 3 * h)) /
                       16.0;
            }
            return 0.5 * (sample(c - h) + sample(c + h));
        }
        return sample(c - h);
    };

    for (int64_t s = top_stride; s >= 2; s /= 2) {
        const int64_t h = s / 2;
        // pass along z: x,y on the coarse lattice
        for (int64_t z = h; z < dims.z; z += s)
            for (int64_t y = 0; y < dims.y; y += s)
                for (int64_t x = 0; x < dims.x; x += s)
                    visit(z * slab + y * row + x, predict_1d({x, y, z}, 2, h), s);
        // pass along y: z already at spacing h
        for (int64_t z = 0; z < dims.z; z += h)
            for (int64_t y = h; y < dims.y; y += s)
                for (int64_t x = 0; x < dims.x; x += s)
                    visit(z * slab + y * row + x, predict_1d({x, y, z}, 1, h), s);
        // pass along x: y,z at spacing h
        for (int64_t z = 0; z < dims.z; z += h)
            for (int64_t y = 0; y < dims.y; y += h)
                for (int64_t x = h; x < dims.x; x += s)
                    visit(z * slab + y * row + x, predict_1d({x, y, z}, 0, h), s);
    }
}

std::vector<uint8_t> compress_interp(std::span<const double> data, Int3 dims,
                                     const CompressorConfig& cfg, double eff_eb) {
    const int64_t stride = anchor_stride(dims);
    const int64_t row = dims.x, slab = dims.x * dims.y;

    std::vector<double> recon(data.size(), 0.0);
    std::vector<double> anchors;
    anchors.reserve(static_cast<size_t>(anchor_count(dims, stride)));
    for (int64_t z = 0; z < dims.z; z += stride)
        for (int64_t y = 0; y < dims.y; y += stride)
            for (int64_t x = 0; x < dims.x; x += stride) {
                double v = data[static_cast<size_t>(z * slab + y * row + x)];
                anchors.push_back(v);
                recon[static_cast<size_t>(z * slab + y * row + x)] = v;
            }

    std::vector<uint32_t> symbols;
    symbols.reserve(data.size() - anchors.size());
    std::vector<Outlier> outliers;
    uint64_t pos = 0;
    interp_sweep(recon, dims, stride, [&](int64_t idx, double pred, int64_t level_stride) {
        Quantizer q(interp_level_eb(eff_eb, level_stride), cfg.quant_capacity);
        double val = data[static_cast<size_t>(idx)];
        uint32_t code = q.quantize(val, pred);
        symbols.push_back(code);
        if (code == 0) outliers.push_back({pos, std::bit_cast<uint64_t>(val)});
        recon[static_cast<size_t>(idx)] = val;
        ++pos;
    });

    std::vector<uint8_t> out;
    write_header(out, {cfg.algorithm, Encoding::SLE, cfg.codec, eff_eb, 0,
                       static_cast<uint32_t>(cfg.unit_block_size), 1, dims, cfg.quant_capacity});
    put_scalar<uint64_t>(out, anchors.size());
    for (double a : anchors) put_scalar<double>(out, a);
    write_bitstream(out, table_for(symbols), symbols);
    write_outliers(out, outliers);
    return out;
}

void decompress_interp(ByteReader& br, const StreamHeader& h, std::vector<double>& out) {
    const int64_t stride = anchor_stride(h.shape);
    const int64_t row = h.shape.x, slab = h.shape.x * h.shape.y;

    auto n_anchors = br.get<uint64_t>();
    if (n_anchors != static_cast<uint64_t>(anchor_count(h.shape, stride))) {
        throw DataError("stream: anchor count does not match shape");
    }
    out.assign(static_cast<size_t>(h.shape.product()), 0.0);
    for (int64_t z = 0; z < h.shape.z; z += stride)
        for (int64_t y = 0; y < h.shape.y; y += stride)
            for (int64_t x = 0; x < h.shape.x; x += stride)
                out[static_cast<size_t>(z * slab + y * row + x)] = br.get<double>();

    uint64_t expect = static_cast<uint64_t>(h.shape.product()) - n_anchors;
    auto symbols = read_bitstream(br, expect);
    auto outlier_list = read_outliers(br);
    OutlierCursor outliers(outlier_list);

    size_t sym_idx = 0;
    uint64_t pos = 0;
    interp_sweep(std::span<double>(out), h.shape, stride,
                 [&](int64_t idx, double pred, int64_t level_stride) {
                     Quantizer q(interp_level_eb(h.effective_eb, level_stride), h.capacity);
                     uint32_t code = symbols[sym_idx++];
                     out[static_cast<size_t>(idx)] =
                         (code == 0) ? outliers.take(pos) : q.recover(pred, code);
                     ++pos;
                 });
    if (sym_idx != symbols.size()) throw DataError("stream: trailing symbols");
    if (!outliers.fully_consumed()) throw DataError("stream: unused outlier entries");
}

// ---------------------------------------------------------------------------
// Baseline1D: independent chunks with order-1 prediction
// ---------------------------------------------------------------------------

std::vector<uint8_t> compress_baseline(std::span<const double> data, Int3 dims,
                                       const CompressorConfig& cfg, double eff_eb) {
    Quantizer q(eff_eb, cfg.quant_capacity);
    const int64_t n = dims.product();
    const int64_t chunk = cfg.chunk_elems;
    const auto n_chunks = static_cast<uint32_t>(ceil_div(n, chunk));

    std::vector<uint8_t> out;
    write_header(out, {cfg.algorithm, Encoding::PerBlock, cfg.codec, eff_eb, 0, 0, n_chunks, dims,
                       cfg.quant_capacity});
    put_scalar<uint64_t>(out, static_cast<uint64_t>(chunk));

    std::vector<Outlier> outliers;
    uint64_t pos = 0;
    std::vector<uint32_t> symbols;
    for (int64_t c = 0; c < n; c += chunk) {
        int64_t len = std::min(chunk, n - c);
        symbols.clear();
        double prev = 0.0;  // chunks are self-contained
        for (int64_t i = 0; i < len; ++i) {
            double val = data[static_cast<size_t>(c + i)];
            uint32_t code = q.quantize(val, prev);
            symbols.push_back(code);
            if (code == 0) outliers.push_back({pos, std::bit_cast<uint64_t>(val)});
            prev = val;
            ++pos;
        }
        write_bitstream(out, table_for(symbols), symbols);
    }
    write_outliers(out, outliers);
    return out;
}

void decompress_baseline(ByteReader& br, const StreamHeader& h, std::vector<double>& out) {
    Quantizer q(h.effective_eb, h.capacity);
    const int64_t n = h.shape.product();
    const auto chunk = static_cast<int64_t>(br.get<uint64_t>());
    if (chunk < 1) throw DataError("stream: bad chunk size");
    if (ceil_div(n, chunk) != h.block_count) {
        throw DataError("stream: chunk count does not match shape");
    }

    out.assign(static_cast<size_t>(n), 0.0);
    struct Pending {
        int64_t offset;
        std::vector<uint32_t> symbols;
    };
    std::vector<Pending> chunks;
    for (int64_t c = 0; c < n; c += chunk) {
        int64_t len = std::min(chunk, n - c);
        chunks.push_back({c, read_bitstream(br, static_cast<uint64_t>(len))});
    }
    auto outlier_list = read_outliers(br);
    OutlierCursor outliers(outlier_list);
    uint64_t pos = 0;
    for (const auto& ck : chunks) {
        double prev = 0.0;
        for (size_t i = 0; i < ck.symbols.size(); ++i) {
            uint32_t code = ck.symbols[i];
            double val = (code == 0) ? outliers.take(pos) : q.recover(prev, code);
            out[static_cast<size_t>(ck.offset) + i] = val;
            prev = val;
            ++pos;
        }
    }
    if (!outliers.fully_consumed()) throw DataError("stream: unused outlier entries");
}

}  // namespace

std::vector<uint8_t> compress_volume(std::span<const double> data, Int3 dims,
                                     const CompressorConfig& raw_cfg) {
    CompressorConfig cfg = raw_cfg.resolved();
    if (dims.product() <= 0 || static_cast<size_t>(dims.product()) != data.size()) {
        throw DataError("compress: shape " + dims.str() + " does not match data length " +
                        std::to_string(data.size()));
    }
    auto [lo, hi] = minmax_of(data);
    double eff_eb = cfg.effective_eb(lo, hi);

    std::vector<uint8_t> inner;
    switch (cfg.algorithm) {
        case Algorithm::LR:
            inner = compress_lr(data, dims, cfg, eff_eb);
            break;
        case Algorithm::Interp:
            inner = compress_interp(data, dims, cfg, eff_eb);
            break;
        case Algorithm::Baseline1D:
            inner = compress_baseline(data, dims, cfg, eff_eb);
            break;
        default:
            throw DataError("compress: unknown algorithm");
    }
    return backend_compress(inner, cfg.codec);
}

DecodedVolume decompress_volume(std::span<const uint8_t> bytes) {
    auto inner = backend_decompress(bytes);
    ByteReader br(inner);
    StreamHeader h = read_header(br);

    DecodedVolume dv;
    dv.dims = h.shape;
    dv.effective_eb = h.effective_eb;
    dv.algorithm = h.algorithm;
    dv.encoding = h.encoding;
    dv.unit = h.U;
    switch (h.algorithm) {
        case Algorithm::LR:
            decompress_lr(br, h, dv.data);
            break;
        case Algorithm::Interp:
            decompress_interp(br, h, dv.data);
            break;
        case Algorithm::Baseline1D:
            decompress_baseline(br, h, dv.data);
            break;
        default:
            throw DataError("stream: unknown algorithm id");
    }
    if (br.remaining() != 0) throw DataError("stream: trailing bytes");
    return dv;
}

int stream_table_count(std::span<const uint8_t> bytes) {
    auto inner = backend_decompress(bytes);
    ByteReader br(inner);
    StreamHeader h = read_header(br);
    switch (h.algorithm) {
        case Algorithm::LR:
            return h.encoding == Encoding::PerBlock ? static_cast<int>(h.block_count) : 1;
        case Algorithm::Interp:
            return 1;
        case Algorithm::Baseline1D:
            return static_cast<int>(h.block_count);
        default:
            throw DataError("stream: unknown algorithm id");
    }
}

}  // namespace amrc
