#pragma once

#include <map>
#include <string>
#include <vector>

#include "amrc/box.hpp"

namespace amrc {

struct AmrLevel {
    int index = 0;
    int refinement_ratio = 2;  // ratio to the next-finer level
    std::vector<AmrBox> boxes;
    // field name -> one row-major (x fastest) array per box
    std::map<std::string, std::vector<std::vector<double>>> fields;

    const std::vector<double>& box_field(const std::string& f, size_t b) const;
    std::vector<double>& box_field(const std::string& f, size_t b);
};

// Patch-based AMR hierarchy. Values are immutable after construction by convention;
// concurrent reads are safe.
struct AmrDataset {
    AmrBox domain;            // level-0 index space
    int unit_block_size = 8;  // U, power of two
    std::vector<std::string> field_names;
    std::vector<AmrLevel> levels;  // coarse to fine

    // Cumulative refinement factor from level 0 to `level`.
    int64_t refinement_to(int level) const;
    AmrBox domain_at(int level) const;
    int64_t total_elements() const;

    // Checks every structural invariant; throws DataError naming the offender.
    void validate() const;
};

}  // namespace amrc
