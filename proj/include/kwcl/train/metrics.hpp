#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kwcl::train {

struct DomainStepLoss {
    std::string domain;
    double classification = 0.0; // this domain's slice of the label objective
    double discrimination = 0.0; // domain cross-entropy on the same forward
    double disc_phase = 0.0;     // mean discriminator-update loss this visit
};

struct StepMetrics {
    std::size_t step = 0;
    double j_tc = 0.0; // summed over domain visits
    double j_dd = 0.0;
    double j_fs = 0.0; // j_tc - lambda * j_dd
    std::vector<DomainStepLoss> per_domain; // in schedule order
};

struct EvalRecord {
    std::size_t step = 0;
    std::vector<std::string> domains;
    std::vector<double> accuracy; // aligned with domains
    double average = 0.0;         // unweighted mean
};

/// Append-only, monotonically step-indexed run log. Wall time is kept out of
/// the serialized form so reruns are byte-identical.
struct RunHistory {
    std::vector<StepMetrics> steps;
    std::vector<EvalRecord> evals;
    double wall_seconds = 0.0; // in-memory only
};

} // namespace kwcl::train
