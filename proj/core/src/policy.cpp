#include "ppd/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ppd/errors.hpp"
#include "ppd/io.hpp"

namespace ppd {

using json = nlohmann::ordered_json;

const std::string& Vocabulary::at(std::size_t i) const {
  if (i >= entries.size()) throw std::invalid_argument("vocabulary index out of range");
  return entries[i];
}

void Vocabulary::validate() const {
  if (entries.empty()) throw std::invalid_argument("vocabulary must contain at least one entry");
  std::vector<std::string> sorted = entries;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("vocabulary entries must be unique");
  for (const auto& e : entries)
    if (e.empty()) throw std::invalid_argument("vocabulary entries must be nonempty");
}

void TokenDistribution::validate(double tol) const {
  if (probs.empty()) throw std::invalid_argument("empty token distribution");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("token distribution has a negative or NaN component");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol)
    throw std::invalid_argument("token distribution does not sum to 1 (sum=" + std::to_string(sum) + ")");
}

PromptPolicy::PromptPolicy(std::vector<TokenDistribution> dists) : dists_(std::move(dists)) {
  validate();
}

PromptPolicy PromptPolicy::new_uniform(std::size_t vocab_size, std::size_t prompt_length) {
  if (vocab_size == 0) throw std::invalid_argument("vocab size must be >= 1");
  if (prompt_length == 0) throw std::invalid_argument("prompt length must be >= 1");
  std::vector<TokenDistribution> dists(prompt_length);
  const double p = 1.0 / static_cast<double>(vocab_size);
  for (auto& d : dists) d.probs.assign(vocab_size, p);
  PromptPolicy policy;
  policy.dists_ = std::move(dists);
  return policy;
}

void PromptPolicy::validate(double tol) const {
  if (dists_.empty()) throw std::invalid_argument("prompt policy must have m >= 1 positions");
  const std::size_t n = dists_[0].size();
  for (const auto& d : dists_) {
    if (d.size() != n) throw std::invalid_argument("all token distributions must share the same N");
    d.validate(tol);
  }
}

std::uint64_t Prompt::fingerprint() const {
  std::uint64_t h = 0x9ae16a3b2f90404fULL;
  for (std::size_t idx : indices) h = hash_combine(h, static_cast<std::uint64_t>(idx));
  return h;
}

static std::size_t draw_categorical(const TokenDistribution& dist, double u) {
  // Inverse CDF; the last border is forced to 1 so u close to 1 stays in range.
  double acc = 0.0;
  const std::size_t n = dist.size();
  for (std::size_t j = 0; j + 1 < n; ++j) {
    acc += dist.probs[j];
    if (u < acc) return j;
  }
  return n - 1;
}

Prompt sample_prompt(const PromptPolicy& policy, Rng& rng) {
  Prompt prompt;
  prompt.indices.reserve(policy.prompt_length());
  for (std::size_t i = 0; i < policy.prompt_length(); ++i)
    prompt.indices.push_back(draw_categorical(policy.dist(i), rng.next_double()));
  return prompt;
}

Prompt sample_prompt(const PromptPolicy& policy, std::uint64_t seed) {
  Rng rng(seed);
  return sample_prompt(policy, rng);
}

double log_prob(const PromptPolicy& policy, const Prompt& prompt) {
  if (prompt.length() != policy.prompt_length())
    throw std::invalid_argument("prompt length does not match policy");
  double sum = 0.0;
  for (std::size_t i = 0; i < prompt.length(); ++i) {
    const std::size_t j = prompt.indices[i];
    if (j >= policy.vocab_size()) throw std::invalid_argument("prompt index out of range");
    const double p = policy.dist(i).probs[j];
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    sum += std::log(p);
  }
  return sum;
}

double entropy(const TokenDistribution& dist) {
  double h = 0.0;
  for (double p : dist.probs)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

std::vector<double> entropy_gradient(const TokenDistribution& dist) {
  std::vector<double> grad(dist.size());
  for (std::size_t j = 0; j < dist.size(); ++j) {
    const double p = std::max(dist.probs[j], kProbFloor);
    grad[j] = -std::log(p) - 1.0;
  }
  return grad;
}

Prompt mode_prompt(const PromptPolicy& policy) {
  Prompt prompt;
  prompt.indices.reserve(policy.prompt_length());
  for (std::size_t i = 0; i < policy.prompt_length(); ++i) {
    const auto& p = policy.dist(i).probs;
    std::size_t best = 0;
    for (std::size_t j = 1; j < p.size(); ++j)
      if (p[j] > p[best]) best = j;
    prompt.indices.push_back(best);
  }
  return prompt;
}

std::string render(const Prompt& prompt, const Vocabulary& vocab) {
  std::string out;
  for (std::size_t i = 0; i < prompt.length(); ++i) {
    if (i) out.push_back(' ');
    out += vocab.at(prompt.indices[i]);
  }
  return out;
}

void save_checkpoint(const PolicyCheckpoint& ckpt, const std::string& path) {
  ckpt.policy.validate();
  json doc;
  doc["version"] = 1;
  doc["m"] = ckpt.policy.prompt_length();
  doc["N"] = ckpt.policy.vocab_size();
  doc["vocab_hash"] = ckpt.vocab_hash;
  doc["config_hash"] = ckpt.config_hash;
  doc["iter"] = ckpt.iteration;
  json rows = json::array();
  for (const auto& d : ckpt.policy.dists()) rows.push_back(d.probs);
  doc["rows"] = std::move(rows);
  write_file_atomic(path, doc.dump() + "\n");
}

PolicyCheckpoint load_checkpoint(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const std::exception& ex) {
    throw LoadError("checkpoint " + path + ": " + ex.what());
  }
  if (doc.value("version", 0) != 1) throw LoadError("checkpoint " + path + ": unsupported version");
  PolicyCheckpoint ckpt;
  ckpt.vocab_hash = doc.value("vocab_hash", "");
  ckpt.config_hash = doc.value("config_hash", "");
  ckpt.iteration = doc.value("iter", 0ULL);
  const std::size_t m = doc.at("m").get<std::size_t>();
  const std::size_t n = doc.at("N").get<std::size_t>();
  std::vector<TokenDistribution> dists;
  dists.reserve(m);
  for (const auto& row : doc.at("rows")) {
    TokenDistribution d;
    d.probs = row.get<std::vector<double>>();
    dists.push_back(std::move(d));
  }
  if (dists.size() != m) throw LoadError("checkpoint " + path + ": row count does not match m");
  PromptPolicy policy(std::move(dists));
  if (policy.vocab_size() != n) throw LoadError("checkpoint " + path + ": row width does not match N");
  ckpt.policy = std::move(policy);
  return ckpt;
}

}  // namespace ppd
