#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ppd/dataset.hpp"
#include "ppd/gateway.hpp"
#include "ppd/policy.hpp"

namespace ppd {

// Sentence encoder interface; distance between examples is the Euclidean
// distance of their embeddings.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() const = 0;
  virtual std::string id() const = 0;
  virtual std::vector<double> embed(const std::string& text) = 0;
};

// Deterministic offline fallback: hashed bag-of-words TF-IDF, L2-normalized.
// Buckets and signs come from a stable token hash, document frequencies from
// fit(), so identical corpora always give identical vectors.
class HashedTfidfProvider : public EmbeddingProvider {
 public:
  explicit HashedTfidfProvider(std::size_t dim = 512);

  void fit(const std::vector<std::string>& corpus);

  std::size_t dim() const override { return dim_; }
  std::string id() const override;
  std::vector<double> embed(const std::string& text) override;

 private:
  std::size_t dim_;
  std::size_t num_docs_ = 0;
  std::map<std::string, std::size_t> doc_freq_;
};

struct NeighborIndex {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> embeddings;

  static NeighborIndex build(const std::vector<std::string>& ids,
                             const std::vector<std::string>& texts, EmbeddingProvider& provider);

  std::size_t size() const { return ids.size(); }
  const std::vector<double>& embedding_of(const std::string& id) const;
  bool contains(const std::string& id) const;
};

// K nearest ids to the query (which must be in the index), ascending distance,
// ties by example id ascending, query excluded. K >= n returns all n-1 others
// (with a stderr warning).
std::vector<std::string> knn(const std::string& query_id, const NeighborIndex& index,
                             std::size_t k);

// Same, for a query embedding that may not be in the index.
std::vector<std::string> knn_embedding(const std::vector<double>& query,
                                       const NeighborIndex& index, std::size_t k,
                                       const std::string& exclude_id = "");

struct DemonstrationSet {
  std::string query_id;
  std::vector<Demonstration> demos;  // ascending distance order
  std::uint64_t prompt_fingerprint = 0;
};

// Assigns pseudo labels to demonstration candidates under the current prompt.
// Reliable examples keep their frozen zero-shot labels; everything else is
// labeled by one classify(x, prompt, {}, t=1) call, cached per
// (example, prompt fingerprint).
class DemoLabeler {
 public:
  DemoLabeler(const Dataset& dataset, Gateway& gateway,
              std::map<std::string, std::size_t> frozen_labels);

  DemonstrationSet label(const std::vector<std::string>& neighbor_ids, const Prompt& prompt,
                         const std::string& prompt_text, const std::string& query_id);

  std::size_t cache_size() const;

 private:
  const Dataset& dataset_;
  Gateway& gateway_;
  std::map<std::string, std::size_t> frozen_;
  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::uint64_t>, std::size_t> cache_;
};

// Free-function form used by tests; equivalent to DemoLabeler::label.
DemonstrationSet label_demonstrations(const std::vector<std::string>& neighbor_ids,
                                      const Prompt& prompt, const std::string& prompt_text,
                                      const std::string& query_id, DemoLabeler& labeler);

// --- embedding cache file (JSONL {example_id, provider, d, vector}) ---

void save_embeddings(const NeighborIndex& index, const std::string& provider_id,
                     const std::string& path);
bool load_embeddings(const std::string& path, const std::string& provider_id, std::size_t dim,
                     NeighborIndex* out);

}  // namespace ppd
