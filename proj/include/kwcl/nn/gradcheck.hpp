#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kwcl/nn/tape.hpp"

namespace kwcl::nn {

/// Builds a scalar loss on a fresh tape, binding whichever parameters it
/// needs via tape.parameter(). Called once per evaluation point.
using LossBuilder = std::function<Tape::NodeId(Tape&)>;

/// Central-difference check of tape gradients for every component of every
/// parameter in `params`. Returns the maximum relative error, with the
/// denominator max(|analytic|, |numeric|, 1e-8).
double finite_diff_check(const LossBuilder& build, const std::vector<Parameter*>& params,
                         double eps = 1e-5);

struct GradCheckCase {
    std::string name;
    std::size_t trials = 0;
    double max_rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Seeded finite-difference sweep over every differentiable op plus a
/// composed three-layer network. Inputs are sampled away from relu kinks and
/// pooling ties. Tolerances are fixed: 1e-6 per op, 1e-5 for the composite.
std::vector<GradCheckCase> run_gradcheck_suite(std::size_t trials, std::uint64_t seed);

} // namespace kwcl::nn
