#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kwcl/corpus/vocabulary.hpp"
#include "kwcl/keywords/types.hpp"
#include "kwcl/model/config.hpp"
#include "kwcl/train/evaluate.hpp"
#include "kwcl/train/metrics.hpp"
#include "kwcl/train/schedule.hpp"

namespace kwcl::io {

/// All writers emit byte-stable output: key order is fixed, doubles use the
/// shortest round-trip form, and nothing time- or host-dependent is included.

/// {"extractor", "N", "domains": [{"domain", "W", "keywords": [...]}]}
/// Domains appear in ranking order. `truncate` limits each keyword list to N
/// (ranking files); otherwise the full lists are emitted (keyword files).
std::string keyword_ranking_json(const keywords::DomainRanking& ranking,
                                 const std::vector<keywords::KeywordList>& lists, bool truncate);

/// One JSON object per line: {"type":"step",...} and {"type":"eval",...}.
/// Wall time is deliberately absent.
std::string history_jsonl(const train::RunHistory& history);

/// Final run report: schedule, config hash, per-domain accuracy, average,
/// lambda, extractor, N.
std::string report_json(const train::CurriculumSchedule& schedule, std::uint64_t config_hash,
                        const train::EvalResult& eval, double lambda);

/// Checkpoint sidecar: architecture, domain order, vocabulary (hash and the
/// full token list, so evaluation can rebuild tokenization), lambda,
/// number of labels.
std::string checkpoint_sidecar_json(const model::ModelConfig& arch,
                                    const std::vector<std::string>& domains,
                                    std::size_t num_labels, const corpus::Vocabulary& vocab);

/// FNV-1a over a canonical dump of the resolved configuration.
std::uint64_t hash_bytes(const std::string& bytes);

std::string hex64(std::uint64_t value);

void write_file(const std::filesystem::path& path, const std::string& content);

} // namespace kwcl::io
