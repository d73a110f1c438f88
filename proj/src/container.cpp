#include "amrc/container.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace amrc {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'A', 'M', 'R', 'C'};
constexpr uint16_t kVersion = 1;

json box_json(const AmrBox& b) {
    return json{{"lo", {b.lo.x, b.lo.y, b.lo.z}}, {"hi", {b.hi.x, b.hi.y, b.hi.z}}};
}

AmrBox box_from_json(const json& j) {
    AmrBox b;
    for (int d = 0; d < 3; ++d) {
        b.lo[d] = j.at("lo").at(d).get<int64_t>();
        b.hi[d] = j.at("hi").at(d).get<int64_t>();
    }
    return b;
}

json config_json(const CompressorConfig& c) {
    return json{{"algorithm", static_cast<int>(c.algorithm)},
                {"eb_mode", static_cast<int>(c.eb_mode)},
                {"eb_value", c.eb_value},
                {"unit_block_size", c.unit_block_size},
                {"sz_block_size", c.sz_block_size},
                {"quant_capacity", c.quant_capacity},
                {"encoding", static_cast<int>(c.encoding)},
                {"codec", static_cast<int>(c.codec)},
                {"arrangement", static_cast<int>(c.arrangement)},
                {"chunk_elems", c.chunk_elems}};
}

CompressorConfig config_from_json(const json& j) {
    CompressorConfig c;
    c.algorithm = static_cast<Algorithm>(j.at("algorithm").get<int>());
    c.eb_mode = static_cast<EbMode>(j.at("eb_mode").get<int>());
    c.eb_value = j.at("eb_value").get<double>();
    c.unit_block_size = j.at("unit_block_size").get<int>();
    c.sz_block_size = j.at("sz_block_size").get<int>();
    c.quant_capacity = j.at("quant_capacity").get<uint32_t>();
    c.encoding = static_cast<Encoding>(j.at("encoding").get<int>());
    c.codec = static_cast<Codec>(j.at("codec").get<int>());
    c.arrangement = static_cast<ArrangementChoice>(j.at("arrangement").get<int>());
    c.chunk_elems = j.at("chunk_elems").get<int64_t>();
    return c;
}

// One compression job; results are committed in job order so the file is
// identical for any worker scheduling.
struct ChunkJob {
    uint16_t level = 0;
    uint16_t field = 0;
    uint32_t rank = 0;
    std::vector<double> data;  // kept values (block-major for grouped, flat for baseline)
};

struct ChunkPayload {
    std::vector<uint8_t> bytes;
};

void run_jobs(const std::vector<ChunkJob>& jobs, const CompressorConfig& cfg,
              std::vector<ChunkPayload>& results) {
    results.resize(jobs.size());
    size_t pool = std::min<size_t>(jobs.size(), std::max(1u, std::thread::hardware_concurrency()));
    if (pool <= 1) {
        for (size_t i = 0; i < jobs.size(); ++i) {
            if (!jobs[i].data.empty()) {
                results[i].bytes =
                    filter_apply(jobs[i].data, static_cast<int64_t>(jobs[i].data.size()), cfg);
            }
        }
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    for (size_t w = 0; w < pool; ++w) {
        workers.emplace_back([&] {
            size_t i;
            while ((i = next.fetch_add(1)) < jobs.size()) {
                try {
                    if (!jobs[i].data.empty()) {
                        results[i].bytes =
                            filter_apply(jobs[i].data, static_cast<int64_t>(jobs[i].data.size()), cfg);
                    }
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

template <class T>
void write_raw(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_raw(std::ifstream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw DataError("container: truncated file");
    return v;
}

}  // namespace

std::vector<double> layout_group_fields(const AmrLevel& lvl, std::span<const int> box_ids,
                                        std::span<const std::string> fields) {
    if (box_ids.empty() || fields.empty()) {
        throw DataError("layout_group_fields: need at least one box and one field");
    }
    std::vector<double> out;
    for (const auto& f : fields) {
        for (int b : box_ids) {
            const auto& arr = lvl.box_field(f, static_cast<size_t>(b));
            out.insert(out.end(), arr.begin(), arr.end());
        }
    }
    return out;
}

int64_t select_chunk_elements(std::span<const int64_t> per_rank_counts) {
    if (per_rank_counts.empty()) throw DataError("select_chunk_elements: empty rank list");
    return *std::max_element(per_rank_counts.begin(), per_rank_counts.end());
}

std::vector<uint8_t> filter_apply(std::span<const double> chunk, int64_t actual_elements,
                                  const CompressorConfig& raw_cfg) {
    if (actual_elements == 0) return {};
    if (actual_elements < 0 || actual_elements > static_cast<int64_t>(chunk.size())) {
        throw DataError("filter_apply: actual_elements exceeds the chunk buffer");
    }
    CompressorConfig cfg = raw_cfg.resolved();
    auto kept = chunk.first(static_cast<size_t>(actual_elements));

    if (cfg.algorithm == Algorithm::Baseline1D) {
        return compress_volume(kept, {actual_elements, 1, 1}, cfg);
    }

    const int U = cfg.unit_block_size;
    const int64_t bvol = int64_t{U} * U * U;
    if (actual_elements % bvol != 0) {
        throw DataError("filter_apply: actual_elements not a whole number of unit blocks");
    }
    const int64_t n = actual_elements / bvol;
    std::vector<std::vector<double>> blocks(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) {
        blocks[static_cast<size_t>(i)].assign(kept.begin() + i * bvol, kept.begin() + (i + 1) * bvol);
    }
    std::vector<BlockRef> refs(static_cast<size_t>(n));  // placement only; sources live in the header
    for (int64_t i = 0; i < n; ++i) refs[static_cast<size_t>(i)] = {0, i};

    ArrangedBuffer buf = cfg.resolved_arrangement() == BlockArrangement::Cluster
                             ? arrange_cluster(blocks, refs, U)
                             : arrange_linear(blocks, refs, U);
    return compress_volume(buf.data, buf.dims, cfg);
}

std::vector<double> filter_decode(std::span<const uint8_t> bytes, int64_t actual_elements) {
    if (actual_elements == 0) return {};
    DecodedVolume dv = decompress_volume(bytes);
    if (dv.algorithm == Algorithm::Baseline1D) {
        if (static_cast<int64_t>(dv.data.size()) != actual_elements) {
            throw DataError("filter_decode: element count mismatch");
        }
        return std::move(dv.data);
    }
    const int U = static_cast<int>(dv.unit);
    const int64_t bvol = int64_t{U} * U * U;
    if (actual_elements % bvol != 0 || dv.dims.x % U || dv.dims.y % U || dv.dims.z % U) {
        throw DataError("filter_decode: element count mismatch");
    }
    const int64_t n = actual_elements / bvol;
    Int3 g{dv.dims.x / U, dv.dims.y / U, dv.dims.z / U};
    if (n > g.product()) throw DataError("filter_decode: element count mismatch");

    std::vector<double> out(static_cast<size_t>(actual_elements));
    for (int64_t i = 0; i < n; ++i) {
        Int3 slot{i % g.x, (i / g.x) % g.y, i / (g.x * g.y)};
        for (int64_t z = 0; z < U; ++z)
            for (int64_t y = 0; y < U; ++y)
                for (int64_t x = 0; x < U; ++x) {
                    out[static_cast<size_t>(i * bvol + linear_index({x, y, z}, {U, U, U}))] =
                        dv.data[static_cast<size_t>(linear_index(
                            {slot.x * U + x, slot.y * U + y, slot.z * U + z}, dv.dims))];
                }
    }
    return out;
}

namespace {

// Kept-block refs of one (level, rank), in dataset order.
std::vector<BlockRef> rank_refs(const AmrDataset& ds, const std::vector<BlockMask>& masks,
                                const RankPlan& plan, int level, uint32_t rank) {
    std::vector<BlockRef> out;
    for (const BlockRef& r : kept_block_refs(ds, masks, level)) {
        if (plan.box_rank[static_cast<size_t>(level)][static_cast<size_t>(r.box)] ==
            static_cast<int>(rank)) {
            out.push_back(r);
        }
    }
    return out;
}

std::vector<ChunkJob> build_jobs(const AmrDataset& ds, const std::vector<BlockMask>& masks,
                                 const CompressorConfig& cfg, const RankPlan& plan) {
    std::vector<ChunkJob> jobs;
    const int U = ds.unit_block_size;
    const int64_t bvol = int64_t{U} * U * U;

    for (size_t l = 0; l < ds.levels.size(); ++l) {
        for (size_t f = 0; f < ds.field_names.size(); ++f) {
            if (cfg.algorithm == Algorithm::Baseline1D) {
                for (int r = 0; r < plan.ranks; ++r) {
                    // the original writer path: box-major, fields within a box,
                    // cut into chunk_elems pieces
                    for (size_t b = 0; b < ds.levels[l].boxes.size(); ++b) {
                        if (plan.box_rank[l][b] != r) continue;
                        const auto& arr = ds.levels[l].box_field(ds.field_names[f], b);
                        for (size_t off = 0; off < arr.size();
                             off += static_cast<size_t>(cfg.chunk_elems)) {
                            size_t len = std::min(static_cast<size_t>(cfg.chunk_elems),
                                                  arr.size() - off);
                            ChunkJob job;
                            job.level = static_cast<uint16_t>(l);
                            job.field = static_cast<uint16_t>(f);
                            job.rank = static_cast<uint32_t>(r);
                            job.data.assign(arr.begin() + static_cast<int64_t>(off),
                                            arr.begin() + static_cast<int64_t>(off + len));
                            jobs.push_back(std::move(job));
                        }
                    }
                }
            } else {
                auto blocks = truncate(ds, masks, static_cast<int>(l), ds.field_names[f]);
                auto refs = kept_block_refs(ds, masks, static_cast<int>(l));
                for (int r = 0; r < plan.ranks; ++r) {
                    ChunkJob job;
                    job.level = static_cast<uint16_t>(l);
                    job.field = static_cast<uint16_t>(f);
                    job.rank = static_cast<uint32_t>(r);
                    for (size_t i = 0; i < refs.size(); ++i) {
                        if (plan.box_rank[l][static_cast<size_t>(refs[i].box)] != r) continue;
                        job.data.insert(job.data.end(), blocks[i].begin(), blocks[i].end());
                    }
                    if (!job.data.empty() &&
                        static_cast<int64_t>(job.data.size()) % bvol != 0) {
                        throw DataError("container: rank chunk is not whole unit blocks");
                    }
                    jobs.push_back(std::move(job));
                }
            }
        }
    }
    return jobs;
}

}  // namespace

ContainerResult container_write(const AmrDataset& ds, const CompressorConfig& raw_cfg,
                                const RankPlan& plan, const std::filesystem::path& file) {
    ds.validate();
    CompressorConfig cfg = raw_cfg.resolved();
    auto masks = cfg.algorithm == Algorithm::Baseline1D ? all_kept_masks(ds) : remove_redundancy(ds);

    auto jobs = build_jobs(ds, masks, cfg, plan);
    std::vector<ChunkPayload> payloads;
    run_jobs(jobs, cfg, payloads);

    // header
    json levels = json::array();
    for (const auto& lvl : ds.levels) {
        json boxes = json::array();
        for (const auto& b : lvl.boxes) boxes.push_back(box_json(b));
        levels.push_back(json{{"index", lvl.index},
                              {"refinement_ratio", lvl.refinement_ratio},
                              {"boxes", std::move(boxes)}});
    }
    const int U = ds.unit_block_size;
    const int64_t bvol = int64_t{U} * U * U;

    ContainerResult res;
    res.chunk_elements.assign(ds.levels.size(), 0);
    json rank_elems = json::array();
    for (int r = 0; r < plan.ranks; ++r) {
        json per_level = json::array();
        for (size_t l = 0; l < ds.levels.size(); ++l) {
            per_level.push_back(plan.elements[static_cast<size_t>(r)][l]);
        }
        rank_elems.push_back(std::move(per_level));
    }
    for (size_t l = 0; l < ds.levels.size(); ++l) {
        if (cfg.algorithm == Algorithm::Baseline1D) {
            res.chunk_elements[l] = cfg.chunk_elems;
        } else {
            std::vector<int64_t> counts(static_cast<size_t>(plan.ranks));
            for (int r = 0; r < plan.ranks; ++r) counts[static_cast<size_t>(r)] = plan.elements[static_cast<size_t>(r)][l];
            res.chunk_elements[l] = select_chunk_elements(counts);
        }
    }

    json arrangement_meta = json::array();
    if (cfg.algorithm != Algorithm::Baseline1D) {
        for (size_t l = 0; l < ds.levels.size(); ++l) {
            json per_rank = json::array();
            for (int r = 0; r < plan.ranks; ++r) {
                int64_t blocks = plan.elements[static_cast<size_t>(r)][l] / bvol;
                int64_t pads = 0;
                if (blocks > 0 && cfg.resolved_arrangement() == BlockArrangement::Cluster) {
                    pads = cluster_grid(blocks).product() - blocks;
                }
                per_rank.push_back(json{{"blocks", blocks}, {"pad_blocks", pads}});
            }
            arrangement_meta.push_back(std::move(per_rank));
        }
    }

    json header{{"version", 1},
                {"dataset",
                 json{{"domain", box_json(ds.domain)},
                      {"unit_block_size", ds.unit_block_size},
                      {"field_names", ds.field_names},
                      {"levels", std::move(levels)}}},
                {"config", config_json(cfg)},
                {"ranks", plan.ranks},
                {"chunk_elements", res.chunk_elements},
                {"arrangement_meta", std::move(arrangement_meta)},
                {"rank_elements", std::move(rank_elems)}};
    std::string header_str = header.dump();

    std::ofstream os(file, std::ios::binary);
    if (!os) throw DataError("container: cannot open " + file.string() + " for writing");
    os.write(kMagic, 4);
    write_raw<uint16_t>(os, kVersion);
    write_raw<uint64_t>(os, header_str.size());
    os.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
    write_raw<uint64_t>(os, jobs.size());

    uint64_t table_pos = 4 + 2 + 8 + header_str.size() + 8;
    uint64_t payload_base = table_pos + jobs.size() * 32;

    uint64_t offset = payload_base;
    res.records.reserve(jobs.size());
    for (size_t i = 0; i < jobs.size(); ++i) {
        ChunkRecord rec;
        rec.offset = offset;
        rec.compressed_len = payloads[i].bytes.size();
        rec.actual_elements = jobs[i].data.size();
        rec.rank = jobs[i].rank;
        rec.level = jobs[i].level;
        rec.field = jobs[i].field;
        res.records.push_back(rec);
        offset += rec.compressed_len;

        write_raw<uint64_t>(os, rec.offset);
        write_raw<uint64_t>(os, rec.compressed_len);
        write_raw<uint64_t>(os, rec.actual_elements);
        write_raw<uint32_t>(os, rec.rank);
        write_raw<uint16_t>(os, rec.level);
        write_raw<uint16_t>(os, rec.field);
    }
    for (const auto& p : payloads) {
        os.write(reinterpret_cast<const char*>(p.bytes.data()),
                 static_cast<std::streamsize>(p.bytes.size()));
        res.payload_bytes += p.bytes.size();
    }
    os.flush();
    if (!os) throw DataError("container: write failed for " + file.string());
    res.file_bytes = offset;

    for (const auto& rec : res.records) {
        if (rec.actual_elements > 0 && cfg.algorithm != Algorithm::Baseline1D) {
            int64_t cap = res.chunk_elements[rec.level];
            res.padding_elements += cap - static_cast<int64_t>(rec.actual_elements);
        }
    }
    return res;
}

ContainerInfo container_info(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw DataError("container: cannot open " + file.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) {
        throw DataError("container: bad magic in " + file.string());
    }
    if (read_raw<uint16_t>(is) != kVersion) throw DataError("container: unsupported version");
    auto header_len = read_raw<uint64_t>(is);
    if (header_len > (uint64_t{1} << 30)) throw DataError("container: implausible header length");
    std::string header_str(header_len, '\0');
    is.read(header_str.data(), static_cast<std::streamsize>(header_len));
    if (!is) throw DataError("container: truncated header");

    json header;
    try {
        header = json::parse(header_str);
    } catch (const json::exception& e) {
        throw DataError("container: malformed header: " + std::string(e.what()));
    }

    ContainerInfo info;
    try {
        const json& jd = header.at("dataset");
        info.skeleton.domain = box_from_json(jd.at("domain"));
        info.skeleton.unit_block_size = jd.at("unit_block_size").get<int>();
        info.skeleton.field_names = jd.at("field_names").get<std::vector<std::string>>();
        for (const auto& jl : jd.at("levels")) {
            AmrLevel lvl;
            lvl.index = jl.at("index").get<int>();
            lvl.refinement_ratio = jl.at("refinement_ratio").get<int>();
            for (const auto& jb : jl.at("boxes")) lvl.boxes.push_back(box_from_json(jb));
            info.skeleton.levels.push_back(std::move(lvl));
        }
        info.cfg = config_from_json(header.at("config"));
        info.ranks = header.at("ranks").get<int>();
        info.chunk_elements = header.at("chunk_elements").get<std::vector<int64_t>>();
        for (const auto& jr : header.at("rank_elements")) {
            info.rank_elements.push_back(jr.get<std::vector<int64_t>>());
        }
    } catch (const json::exception& e) {
        throw DataError("container: malformed header: " + std::string(e.what()));
    }

    auto count = read_raw<uint64_t>(is);
    if (count > (uint64_t{1} << 32)) throw DataError("container: implausible chunk count");
    info.records.resize(count);
    for (auto& rec : info.records) {
        rec.offset = read_raw<uint64_t>(is);
        rec.compressed_len = read_raw<uint64_t>(is);
        rec.actual_elements = read_raw<uint64_t>(is);
        rec.rank = read_raw<uint32_t>(is);
        rec.level = read_raw<uint16_t>(is);
        rec.field = read_raw<uint16_t>(is);
        if (rec.level >= info.skeleton.levels.size() ||
            rec.field >= info.skeleton.field_names.size()) {
            throw DataError("container: chunk record references unknown level or field");
        }
    }

    // per-rank stored sizes must reconcile with the chunk table
    std::vector<std::vector<int64_t>> sums(static_cast<size_t>(info.ranks),
                                           std::vector<int64_t>(info.skeleton.levels.size(), 0));
    for (const auto& rec : info.records) {
        if (rec.rank >= static_cast<uint32_t>(info.ranks)) {
            throw DataError("container: chunk record references unknown rank");
        }
        if (rec.field == 0) sums[rec.rank][rec.level] += static_cast<int64_t>(rec.actual_elements);
    }
    for (size_t r = 0; r < sums.size(); ++r) {
        for (size_t l = 0; l < sums[r].size(); ++l) {
            if (sums[r][l] != info.rank_elements[r][l]) {
                throw DataError("container: rank " + std::to_string(r) + " level " + std::to_string(l) +
                                ": chunk table sums to " + std::to_string(sums[r][l]) +
                                " elements but header declares " +
                                std::to_string(info.rank_elements[r][l]));
            }
        }
    }
    return info;
}

namespace {

std::vector<uint8_t> read_payload(std::ifstream& is, const ChunkRecord& rec) {
    std::vector<uint8_t> bytes(rec.compressed_len);
    is.seekg(static_cast<std::streamoff>(rec.offset));
    is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(rec.compressed_len));
    if (!is) throw DataError("container: truncated payload at offset " + std::to_string(rec.offset));
    return bytes;
}

RankPlan replan(const ContainerInfo& info) {
    // round-robin assignment is part of the format; rebuild it from the header
    std::vector<BlockMask> masks = info.cfg.algorithm == Algorithm::Baseline1D
                                       ? all_kept_masks(info.skeleton)
                                       : remove_redundancy(info.skeleton);
    return partition(info.skeleton, masks, info.ranks);
}

}  // namespace

AmrDataset container_read(const std::filesystem::path& file) {
    ContainerInfo info = container_info(file);
    const AmrDataset& skel = info.skeleton;
    const int U = skel.unit_block_size;
    const int64_t bvol = int64_t{U} * U * U;

    AmrDataset out = skel;  // skeleton copy; fill arrays with zeros
    for (auto& lvl : out.levels) {
        for (const auto& f : out.field_names) {
            auto& arrays = lvl.fields[f];
            arrays.clear();
            for (const auto& b : lvl.boxes) {
                arrays.emplace_back(static_cast<size_t>(b.volume()), 0.0);
            }
        }
    }

    auto masks = info.cfg.algorithm == Algorithm::Baseline1D ? all_kept_masks(skel)
                                                             : remove_redundancy(skel);
    RankPlan plan = replan(info);

    std::ifstream is(file, std::ios::binary);
    if (!is) throw DataError("container: cannot open " + file.string());

    if (info.cfg.algorithm == Algorithm::Baseline1D) {
        // mirror the write enumeration: (level, field, rank, box, chunk)
        size_t rec_idx = 0;
        for (size_t l = 0; l < skel.levels.size(); ++l) {
            for (size_t f = 0; f < skel.field_names.size(); ++f) {
                for (int r = 0; r < plan.ranks; ++r) {
                    for (size_t b = 0; b < skel.levels[l].boxes.size(); ++b) {
                        if (plan.box_rank[l][b] != r) continue;
                        auto& arr = out.levels[l].box_field(skel.field_names[f], b);
                        for (size_t off = 0; off < arr.size();
                             off += static_cast<size_t>(info.cfg.chunk_elems)) {
                            if (rec_idx >= info.records.size()) {
                                throw DataError("container: chunk table shorter than the layout");
                            }
                            const ChunkRecord& rec = info.records[rec_idx++];
                            size_t len = std::min(static_cast<size_t>(info.cfg.chunk_elems),
                                                  arr.size() - off);
                            if (rec.actual_elements != len || rec.level != l || rec.field != f) {
                                throw DataError("container: chunk record does not match the layout");
                            }
                            auto bytes = read_payload(is, rec);
                            auto vals = filter_decode(bytes, static_cast<int64_t>(len));
                            std::copy(vals.begin(), vals.end(),
                                      arr.begin() + static_cast<int64_t>(off));
                        }
                    }
                }
            }
        }
        if (rec_idx != info.records.size()) throw DataError("container: unused chunk records");
        return out;
    }

    size_t rec_idx = 0;
    for (size_t l = 0; l < skel.levels.size(); ++l) {
        for (size_t f = 0; f < skel.field_names.size(); ++f) {
            for (int r = 0; r < plan.ranks; ++r) {
                if (rec_idx >= info.records.size()) {
                    throw DataError("container: chunk table shorter than the layout");
                }
                const ChunkRecord& rec = info.records[rec_idx++];
                if (rec.level != l || rec.field != f || rec.rank != static_cast<uint32_t>(r)) {
                    throw DataError("container: chunk record does not match the layout");
                }
                auto refs = rank_refs(skel, masks, plan, static_cast<int>(l), rec.rank);
                if (static_cast<int64_t>(rec.actual_elements) !=
                    static_cast<int64_t>(refs.size()) * bvol) {
                    throw DataError("container: chunk element count does not match the mask geometry");
                }
                if (refs.empty()) continue;
                auto bytes = read_payload(is, rec);
                auto vals = filter_decode(bytes, static_cast<int64_t>(rec.actual_elements));
                // scatter blocks back into their boxes
                const AmrLevel& lvl = skel.levels[l];
                for (size_t i = 0; i < refs.size(); ++i) {
                    const AmrBox& box = lvl.boxes[static_cast<size_t>(refs[i].box)];
                    Int3 sz = box.size();
                    Int3 nb = block_grid(box, U);
                    Int3 bc{refs[i].block % nb.x, (refs[i].block / nb.x) % nb.y,
                            refs[i].block / (nb.x * nb.y)};
                    auto& arr = out.levels[l].box_field(skel.field_names[f],
                                                        static_cast<size_t>(refs[i].box));
                    const double* src = vals.data() + static_cast<int64_t>(i) * bvol;
                    for (int64_t z = 0; z < U; ++z)
                        for (int64_t y = 0; y < U; ++y)
                            for (int64_t x = 0; x < U; ++x) {
                                arr[linear_index({bc.x * U + x, bc.y * U + y, bc.z * U + z}, sz)] =
                                    src[linear_index({x, y, z}, {U, U, U})];
                            }
                }
            }
        }
    }
    if (rec_idx != info.records.size()) throw DataError("container: unused chunk records");

    refill_redundant(out, masks);
    out.validate();
    return out;
}

void verify_container(const std::filesystem::path& file, const AmrDataset& original) {
    ContainerInfo info = container_info(file);
    auto masks = info.cfg.algorithm == Algorithm::Baseline1D ? all_kept_masks(info.skeleton)
                                                             : remove_redundancy(info.skeleton);
    RankPlan plan = replan(info);

    // replay the writer's chunk enumeration on the original data
    auto jobs = build_jobs(original, masks, info.cfg, plan);
    if (jobs.size() != info.records.size()) {
        throw DataError("verify: chunk table does not match the dataset layout");
    }

    std::ifstream is(file, std::ios::binary);
    if (!is) throw DataError("container: cannot open " + file.string());

    for (size_t j = 0; j < jobs.size(); ++j) {
        const ChunkRecord& rec = info.records[j];
        if (rec.actual_elements != jobs[j].data.size()) {
            throw DataError("verify: chunk element count mismatch");
        }
        if (rec.actual_elements == 0) continue;
        auto bytes = read_payload(is, rec);
        double eb = decompress_volume(bytes).effective_eb;
        auto vals = filter_decode(bytes, static_cast<int64_t>(rec.actual_elements));
        for (size_t i = 0; i < vals.size(); ++i) {
            if (std::abs(jobs[j].data[i] - vals[i]) > eb * (1.0 + 1e-12)) {
                throw BoundViolation("chunk at offset " + std::to_string(rec.offset) + ": point " +
                                     std::to_string(i) + " error " +
                                     std::to_string(std::abs(jobs[j].data[i] - vals[i])) +
                                     " exceeds bound " + std::to_string(eb));
            }
        }
    }
}

}  // namespace amrc
