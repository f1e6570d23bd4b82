#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppd/gateway.hpp"

namespace ppd {

enum class ConfidenceMode { LG, RD };

struct ConfidenceConfig {
  std::vector<double> temperatures{0.5, 1.0, 1.5};  // T, all > 0
  double gamma = 0.7;
  std::size_t random_contexts = 8;  // R, contexts per query for RD
  ConfidenceMode mode = ConfidenceMode::RD;
  bool raw_rd = false;             // keep the literal unbounded ratio
  bool rd_soft_numerator = false;  // t=1 distribution instead of the one-hot t=0 numerator

  void validate() const;
};

struct PseudoLabelRecord {
  std::string example_id;
  std::string text_hash;
  std::size_t zero_shot_label = 0;
  double c_lg = 0.0;
  double c_rd = 0.0;
  bool reliable = false;
  std::optional<std::size_t> learned_label;
};

// scores[y] / sum(scores). All-zero scores -> std::invalid_argument.
std::vector<double> normalize(const std::vector<double>& scores);
std::vector<double> normalize(const ClassifierResponse& response);

struct ConfidenceScore {
  double confidence = 0.0;
  std::size_t label = 0;  // argmax, ties to the lowest class index
};

// Average linguistic confidence: max component of the mean normalized
// distribution over the temperature candidates. Value in [1/C, 1].
ConfidenceScore lg_score(Gateway& gateway, const Fields& query, const std::string& prompt_text,
                         const std::vector<double>& temperatures);

// Bias-reduced confidence: the greedy (t=0) one-hot output divided
// elementwise by the model's mean response to R random contexts across the
// temperature candidates; the ratio vector is normalized to a distribution
// before taking the max unless raw_rd is set.
ConfidenceScore rd_score(Gateway& gateway, const Fields& query, const std::string& prompt_text,
                         const ConfidenceConfig& config, const std::vector<Fields>& corpus,
                         std::uint64_t seed);

// Records with c >= gamma under the configured mode; sets their reliable
// flags. Empty result -> std::runtime_error advising a lower gamma.
std::vector<PseudoLabelRecord> select_reliable(std::vector<PseudoLabelRecord>& records,
                                               double gamma, ConfidenceMode mode);

struct ReliableSummary {
  std::size_t total = 0;
  std::size_t reliable = 0;
  std::vector<std::size_t> per_class;  // reliable count by zero-shot label
};

ReliableSummary summarize_reliable(const std::vector<PseudoLabelRecord>& records,
                                   std::size_t num_classes);

// --- pseudo-label store (JSONL; meta line with the config hash, then one
// record per example) ---

void save_store(const std::vector<PseudoLabelRecord>& records, const std::string& config_hash,
                const std::string& path);
std::vector<PseudoLabelRecord> load_store(const std::string& path,
                                          std::string* config_hash_out = nullptr);

}  // namespace ppd
