#include "amrc/dataset_io.hpp"

#include <bit>
#include <fstream>

#include <json.hpp>

namespace amrc {

static_assert(std::endian::native == std::endian::little, "raw f64 files are little-endian");

namespace {

using nlohmann::json;

std::string raw_name(int level, size_t box, const std::string& field) {
    return "L" + std::to_string(level) + "_B" + std::to_string(box) + "_" + field + ".f64";
}

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

}  // namespace

void export_dataset(const AmrDataset& ds, const std::filesystem::path& dir) {
    ds.validate();
    std::filesystem::create_directories(dir);

    json levels = json::array();
    for (const auto& lvl : ds.levels) {
        json boxes = json::array();
        for (const auto& b : lvl.boxes) boxes.push_back(box_json(b));
        levels.push_back(json{{"index", lvl.index},
                              {"refinement_ratio", lvl.refinement_ratio},
                              {"boxes", std::move(boxes)}});
    }
    json header{{"version", 1},
                {"domain", box_json(ds.domain)},
                {"unit_block_size", ds.unit_block_size},
                {"field_names", ds.field_names},
                {"levels", std::move(levels)}};

    std::ofstream hf(dir / "header.json");
    hf << header.dump(2) << "\n";
    if (!hf) throw DataError("export: cannot write " + (dir / "header.json").string());

    for (const auto& lvl : ds.levels) {
        for (size_t b = 0; b < lvl.boxes.size(); ++b) {
            for (const auto& f : ds.field_names) {
                const auto& arr = lvl.box_field(f, b);
                std::ofstream rf(dir / raw_name(lvl.index, b, f), std::ios::binary);
                rf.write(reinterpret_cast<const char*>(arr.data()),
                         static_cast<std::streamsize>(arr.size() * sizeof(double)));
                if (!rf) throw DataError("export: cannot write " + raw_name(lvl.index, b, f));
            }
        }
    }
}

AmrDataset import_dataset(const std::filesystem::path& dir) {
    std::ifstream hf(dir / "header.json");
    if (!hf) throw DataError("import: missing " + (dir / "header.json").string());
    json header;
    try {
        hf >> header;
    } catch (const json::exception& e) {
        throw DataError("import: malformed header.json: " + std::string(e.what()));
    }

    AmrDataset ds;
    try {
        if (header.at("version").get<int>() != 1) throw DataError("import: unsupported header version");
        ds.domain = box_from_json(header.at("domain"));
        ds.unit_block_size = header.at("unit_block_size").get<int>();
        ds.field_names = header.at("field_names").get<std::vector<std::string>>();
        for (const auto& jl : header.at("levels")) {
            AmrLevel lvl;
            lvl.index = jl.at("index").get<int>();
            lvl.refinement_ratio = jl.at("refinement_ratio").get<int>();
            for (const auto& jb : jl.at("boxes")) lvl.boxes.push_back(box_from_json(jb));
            ds.levels.push_back(std::move(lvl));
        }
    } catch (const json::exception& e) {
        throw DataError("import: malformed header.json: " + std::string(e.what()));
    }

    for (auto& lvl : ds.levels) {
        for (const auto& f : ds.field_names) {
            auto& arrays = lvl.fields[f];
            for (size_t b = 0; b < lvl.boxes.size(); ++b) {
                auto path = dir / raw_name(lvl.index, b, f);
                std::ifstream rf(path, std::ios::binary | std::ios::ate);
                if (!rf) throw DataError("import: missing " + path.string());
                auto bytes = static_cast<int64_t>(rf.tellg());
                int64_t expect = lvl.boxes[b].volume() * static_cast<int64_t>(sizeof(double));
                if (bytes != expect) {
                    throw DataError("import: size mismatch for level " + std::to_string(lvl.index) +
                                    " box " + std::to_string(b) + " field " + f + ": file has " +
                                    std::to_string(bytes) + " bytes, header declares " +
                                    std::to_string(expect));
                }
                std::vector<double> arr(static_cast<size_t>(lvl.boxes[b].volume()));
                rf.seekg(0);
                rf.read(reinterpret_cast<char*>(arr.data()), bytes);
                if (!rf) throw DataError("import: short read on " + path.string());
                arrays.push_back(std::move(arr));
            }
        }
    }

    ds.validate();
    return ds;
}

}  // namespace amrc
