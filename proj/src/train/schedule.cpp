#include "kwcl/train/schedule.hpp"

#include <algorithm>

#include "kwcl/util/errors.hpp"

namespace kwcl::train {

CurriculumSchedule build_schedule(const keywords::DomainRanking& ranking,
                                  const std::vector<std::string>& dataset_domains) {
    std::vector<std::string> ranked;
    for (const keywords::RankedDomain& e : ranking.entries) ranked.push_back(e.domain);

    std::vector<std::string> a = ranked, b = dataset_domains;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
        throw DataError("schedule: ranking domains do not match the dataset's domains");
    }

    CurriculumSchedule schedule;
    schedule.order = std::move(ranked);
    schedule.extractor = ranking.extractor;
    schedule.top_n = ranking.top_n;
    for (const keywords::RankedDomain& e : ranking.entries) schedule.weights.push_back(e.weight_sum);
    return schedule;
}

} // namespace kwcl::train
