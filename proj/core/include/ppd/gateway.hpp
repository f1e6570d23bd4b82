#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace ppd {

// Placeholder name -> text for one example (e.g. {"sentence": "great movie"}).
using Fields = std::map<std::string, std::string>;

// Ordered label words of the task; index in label_words is the class index
// used everywhere else.
struct LabelSpace {
  std::vector<std::string> label_words;

  std::size_t num_classes() const { return label_words.size(); }
  std::string options_text() const;  // "positive, negative"
  void validate() const;             // C >= 2, case-insensitively unique
};

// Manual template with {field} placeholders and an {options} slot; the body
// always ends with "Answer:".
struct TaskTemplate {
  std::string name;
  std::string body;
  std::vector<std::string> field_names;  // placeholders consumed, excluding options

  void validate() const;
  static TaskTemplate from_body(std::string name, std::string body);
};

// Fills the template's placeholders from `fields`. Missing field -> throws
// std::invalid_argument naming the field.
std::string render_template(const TaskTemplate& tmpl, const Fields& fields,
                            const LabelSpace& labels);

// One in-context example with its pseudo label.
struct Demonstration {
  Fields fields;
  std::size_t pseudo_label = 0;
};

// Helper for single-field tasks.
Demonstration make_demo(const TaskTemplate& tmpl, std::string text, std::size_t pseudo_label);

// Nonnegative per-label-word mass for one query.
struct ClassifierResponse {
  std::vector<double> scores;
  std::optional<std::vector<double>> raw_logprobs;
  bool floored = false;  // some label word was missing from the backend's top logprobs

  void validate() const;  // finite, >= 0, not all zero
};

// t > 0: exp(logit_c / t), unnormalized. t = 0: one-hot at the argmax, ties
// to the lowest index. Negative t -> std::invalid_argument.
std::vector<double> temperature_scale(const std::vector<double>& logits, double t);

// Layout: [prompt line?] [demo blocks, label word appended after "Answer:"]
// [query block with "Answer:" left open], joined by single newlines. Empty
// prompt and no demos yields the bare templated query.
std::string assemble_input(const Fields& query, const std::string& prompt_text,
                           const std::vector<Demonstration>& demos, const TaskTemplate& tmpl,
                           const LabelSpace& labels);

// What a backend sees for one classification. `assembled` is the full input
// text; the structured fields exist for deterministic simulated backends.
struct ClassifyRequest {
  std::string assembled;
  std::string query_text;
  std::string prompt_text;
  std::vector<Demonstration> demos;
  const LabelSpace* labels = nullptr;
  double temperature = 1.0;
};

// Black-box classifier: one log-score per label word.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string id() const = 0;
  virtual std::vector<double> logits(const ClassifyRequest& req) = 0;
  virtual bool last_floored() const { return false; }
};

struct GatewayOptions {
  std::string cache_path;                // empty -> in-memory cache only
  std::uint64_t max_backend_calls = 0;   // 0 -> unlimited
  double rate_limit_qps = 0.0;           // 0 -> unlimited
};

struct GatewayStats {
  std::uint64_t backend_calls = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t estimated_tokens = 0;
};

// Uniform classification interface over a backend: assembles the input,
// consults the response cache, enforces the call budget and rate limit,
// applies temperature scaling. Safe to call from multiple workers.
class Gateway {
 public:
  Gateway(std::shared_ptr<Backend> backend, TaskTemplate tmpl, LabelSpace labels,
          GatewayOptions options = {});

  ClassifierResponse classify(const Fields& query, const std::string& prompt_text,
                              const std::vector<Demonstration>& demos, double temperature);

  const LabelSpace& labels() const { return labels_; }
  const TaskTemplate& tmpl() const { return tmpl_; }
  GatewayStats stats() const;

 private:
  struct CacheEntry {
    std::vector<double> scores;
    std::optional<std::vector<double>> raw_logprobs;
    bool floored = false;
  };

  std::string cache_key(const std::string& assembled, double temperature) const;
  void load_cache();
  void persist(const std::string& key, const CacheEntry& entry);

  std::shared_ptr<Backend> backend_;
  TaskTemplate tmpl_;
  LabelSpace labels_;
  GatewayOptions options_;

  mutable std::mutex mu_;
  std::map<std::string, CacheEntry> cache_;
  GatewayStats stats_;
  double bucket_tokens_ = 0.0;
  std::chrono::steady_clock::time_point bucket_refill_;
};

}  // namespace ppd
