#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kwcl/keywords/types.hpp"

namespace kwcl::train {

/// The fixed domain visiting order for every training step, plus where it
/// came from. Immutable for the whole run.
struct CurriculumSchedule {
    std::vector<std::string> order; // highest keyword weight sum first
    std::string extractor;          // "textrank" | "yake" | "embedding" | "random"
    std::size_t top_n = 0;
    std::vector<double> weights;    // aligned with order; zeros for random
};

/// Schedule = ranking order. `dataset_domains` is the dataset's domain list;
/// a ranking that is not a permutation of it is an error.
CurriculumSchedule build_schedule(const keywords::DomainRanking& ranking,
                                  const std::vector<std::string>& dataset_domains);

} // namespace kwcl::train
