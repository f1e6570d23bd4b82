#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ppd/policy.hpp"

namespace ppd {

// Adjacent-pair statistics over a tokenized corpus. Bigrams never cross
// sentence boundaries.
struct NgramStats {
  std::map<std::string, std::uint64_t> unigram_counts;
  std::map<std::pair<std::string, std::string>, std::uint64_t> bigram_counts;
  std::uint64_t total_unigrams = 0;
  std::uint64_t total_bigrams = 0;
};

// Exact counts; corpus sentences are tokenized via ppd::tokenize.
NgramStats count_ngrams(const std::vector<std::string>& corpus);

// log(Pr(x1,x2) / (Pr(x1) Pr(x2))). Never-co-occurring pair -> -inf.
// Unknown word -> std::invalid_argument.
double pmi(const std::string& x1, const std::string& x2, const NgramStats& stats);

// Greedy left-to-right segmentation: adjacent words merge into one n-gram iff
// their PMI >= threshold; merging is transitive. Words unknown to the stats
// act as PMI -inf at both boundaries.
std::vector<std::string> segment(const std::string& sentence, const NgramStats& stats,
                                 double pmi_threshold);

struct VocabParams {
  std::uint64_t min_frequency = 5;  // delta
  std::size_t n_max = 50;
  double pmi_threshold = 0.0;
};

// Segments every sentence, counts the resulting n-grams, keeps those with
// frequency >= delta, sorts by frequency descending (ties lexicographic) and
// truncates to n_max.
Vocabulary build_vocabulary(const std::vector<std::string>& corpus, const VocabParams& params);

// --- vocabulary file ({version, params, entries}); its content hash is the
// vocab_hash referenced by policy checkpoints ---

void save_vocabulary(const Vocabulary& vocab, const VocabParams& params, const std::string& path);
Vocabulary load_vocabulary(const std::string& path, VocabParams* params_out = nullptr);
std::string vocab_file_hash(const std::string& path);

}  // namespace ppd
