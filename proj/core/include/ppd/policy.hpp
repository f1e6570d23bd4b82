#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ppd/hash.hpp"

namespace ppd {

// Ordered list of candidate prompt n-grams. Entries are unique nonempty
// strings; an n-gram may contain internal spaces.
struct Vocabulary {
  std::vector<std::string> entries;

  std::size_t size() const { return entries.size(); }
  const std::string& at(std::size_t i) const;

  void validate() const;  // throws std::invalid_argument on broken invariants
};

// A point on the probability simplex over the vocabulary.
struct TokenDistribution {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  void validate(double tol = 1e-9) const;
};

// Probability floor applied before logs and score/entropy gradients; the
// simplex projection can output exact zeros.
inline constexpr double kProbFloor = 1e-8;

// One concrete prompt: vocabulary indices, one per position.
struct Prompt {
  std::vector<std::size_t> indices;

  std::size_t length() const { return indices.size(); }
  std::uint64_t fingerprint() const;
  bool operator==(const Prompt&) const = default;
};

// The learnable object: m independent categorical distributions over an
// N-entry vocabulary.
class PromptPolicy {
 public:
  PromptPolicy() = default;
  explicit PromptPolicy(std::vector<TokenDistribution> dists);

  // Uniform initialization: every component 1/N.
  static PromptPolicy new_uniform(std::size_t vocab_size, std::size_t prompt_length);

  std::size_t prompt_length() const { return dists_.size(); }
  std::size_t vocab_size() const { return dists_.empty() ? 0 : dists_[0].size(); }

  const TokenDistribution& dist(std::size_t i) const { return dists_.at(i); }
  TokenDistribution& dist(std::size_t i) { return dists_.at(i); }
  const std::vector<TokenDistribution>& dists() const { return dists_; }

  void validate(double tol = 1e-9) const;

  bool operator==(const PromptPolicy&) const = default;

 private:
  std::vector<TokenDistribution> dists_;
};

// Draws index i from distribution i independently via inverse CDF.
// Deterministic given the generator state; bit-exact across platforms.
Prompt sample_prompt(const PromptPolicy& policy, Rng& rng);
Prompt sample_prompt(const PromptPolicy& policy, std::uint64_t seed);

// Sum of log p_{i, j_i}. Returns -inf if any selected component is zero.
double log_prob(const PromptPolicy& policy, const Prompt& prompt);

// Shannon entropy, natural log, 0*log 0 == 0. Value in [0, log N].
double entropy(const TokenDistribution& dist);

// Component j is -log p_j - 1. Components are floored at kProbFloor first.
std::vector<double> entropy_gradient(const TokenDistribution& dist);

// Argmax per position; ties broken by lowest index.
Prompt mode_prompt(const PromptPolicy& policy);

// Vocabulary texts of the prompt indices joined by single spaces.
std::string render(const Prompt& prompt, const Vocabulary& vocab);

// --- checkpoint file (versioned JSON: {version, m, N, vocab_hash, rows}) ---

struct PolicyCheckpoint {
  PromptPolicy policy;
  std::string vocab_hash;
  std::string config_hash;
  std::uint64_t iteration = 0;
};

void save_checkpoint(const PolicyCheckpoint& ckpt, const std::string& path);
PolicyCheckpoint load_checkpoint(const std::string& path);  // validates simplex invariants

}  // namespace ppd
