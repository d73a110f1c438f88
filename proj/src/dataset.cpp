#include "amrc/dataset.hpp"

#include <algorithm>

namespace amrc {

const std::vector<double>& AmrLevel::box_field(const std::string& f, size_t b) const {
    auto it = fields.find(f);
    if (it == fields.end()) throw DataError("level " + std::to_string(index) + ": unknown field " + f);
    if (b >= it->second.size()) {
        throw DataError("level " + std::to_string(index) + ": box index " + std::to_string(b) +
                        " out of range for field " + f);
    }
    return it->second[b];
}

std::vector<double>& AmrLevel::box_field(const std::string& f, size_t b) {
    return const_cast<std::vector<double>&>(std::as_const(*this).box_field(f, b));
}

int64_t AmrDataset::refinement_to(int level) const {
    int64_t r = 1;
    for (int l = 0; l < level; ++l) r *= levels[l].refinement_ratio;
    return r;
}

AmrBox AmrDataset::domain_at(int level) const {
    return refine(domain, static_cast<int>(refinement_to(level)));
}

int64_t AmrDataset::total_elements() const {
    int64_t n = 0;
    for (const auto& lvl : levels)
        for (const auto& b : lvl.boxes) n += b.volume();
    return n * static_cast<int64_t>(field_names.size());
}

namespace {

bool is_pow2(int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

void AmrDataset::validate() const {
    if (!domain.valid()) throw DataError("dataset: invalid domain " + domain.str());
    if (!is_pow2(unit_block_size)) {
        throw DataError("dataset: unit_block_size " + std::to_string(unit_block_size) +
                        " is not a power of two");
    }
    if (levels.empty()) throw DataError("dataset: no levels");

    for (size_t l = 0; l < levels.size(); ++l) {
        const AmrLevel& lvl = levels[l];
        const std::string where = "level " + std::to_string(l);
        if (lvl.index != static_cast<int>(l)) throw DataError(where + ": index mismatch");
        if (lvl.refinement_ratio < 2) throw DataError(where + ": refinement_ratio < 2");

        for (size_t b = 0; b < lvl.boxes.size(); ++b) {
            const AmrBox& box = lvl.boxes[b];
            if (!box.valid()) throw DataError(where + " box " + std::to_string(b) + ": invalid " + box.str());
            Int3 sz = box.size();
            for (int d = 0; d < 3; ++d) {
                if (sz[d] % unit_block_size != 0) {
                    throw DataError(where + " box " + std::to_string(b) + ": dimension " +
                                    std::to_string(sz[d]) + " not a multiple of unit block size " +
                                    std::to_string(unit_block_size));
                }
            }
        }
        for (size_t a = 0; a < lvl.boxes.size(); ++a) {
            for (size_t b = a + 1; b < lvl.boxes.size(); ++b) {
                if (intersect(lvl.boxes[a], lvl.boxes[b])) {
                    throw DataError(where + ": boxes " + std::to_string(a) + " " + lvl.boxes[a].str() +
                                    " and " + std::to_string(b) + " " + lvl.boxes[b].str() + " overlap");
                }
            }
        }

        // same field set on every level, arrays sized to box volumes
        if (lvl.fields.size() != field_names.size()) {
            throw DataError(where + ": field count " + std::to_string(lvl.fields.size()) +
                            " != dataset field count " + std::to_string(field_names.size()));
        }
        for (const auto& f : field_names) {
            auto it = lvl.fields.find(f);
            if (it == lvl.fields.end()) throw DataError(where + ": missing field " + f);
            if (it->second.size() != lvl.boxes.size()) {
                throw DataError(where + " field " + f + ": array count " +
                                std::to_string(it->second.size()) + " != box count " +
                                std::to_string(lvl.boxes.size()));
            }
            for (size_t b = 0; b < lvl.boxes.size(); ++b) {
                if (static_cast<int64_t>(it->second[b].size()) != lvl.boxes[b].volume()) {
                    throw DataError(where + " field " + f + " box " + std::to_string(b) +
                                    ": array length " + std::to_string(it->second[b].size()) +
                                    " != box volume " + std::to_string(lvl.boxes[b].volume()));
                }
            }
        }
    }

    // level-0 boxes tile inside the domain; finer boxes coarsen into the parent union
    for (size_t b = 0; b < levels[0].boxes.size(); ++b) {
        if (!domain.contains(levels[0].boxes[b])) {
            throw DataError("level 0 box " + std::to_string(b) + " " + levels[0].boxes[b].str() +
                            " outside domain " + domain.str());
        }
    }
    for (size_t l = 0; l + 1 < levels.size(); ++l) {
        int ratio = levels[l].refinement_ratio;
        for (size_t b = 0; b < levels[l + 1].boxes.size(); ++b) {
            AmrBox cb = coarsen(levels[l + 1].boxes[b], ratio);
            int64_t covered = 0;
            for (const AmrBox& parent : levels[l].boxes) {
                if (auto iv = intersect(cb, parent)) covered += iv->volume();
            }
            if (covered != cb.volume()) {
                throw DataError("level " + std::to_string(l + 1) + " box " + std::to_string(b) + " " +
                                levels[l + 1].boxes[b].str() + " coarsens outside the level " +
                                std::to_string(l) + " box union");
            }
        }
    }
}

}  // namespace amrc
