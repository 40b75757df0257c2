#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kwcl/nn/tape.hpp"

namespace kwcl::nn {

/// Versioned binary parameter container:
///   magic "KWCLPRM1", u64 parameter count, then per parameter
///   u32 name length, name bytes, u32 rank, u64 dims, raw f64 values.
/// Integers and doubles are little-endian; round trips are bit-exact.
void write_parameters(std::ostream& out, const std::vector<const Parameter*>& params);
std::map<std::string, Tensor> read_parameters(std::istream& in);

void write_parameter_file(const std::filesystem::path& path,
                          const std::vector<const Parameter*>& params);
std::map<std::string, Tensor> read_parameter_file(const std::filesystem::path& path);

} // namespace kwcl::nn
