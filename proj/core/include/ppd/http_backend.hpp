#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppd/gateway.hpp"

namespace ppd {

struct HttpBackendConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  std::string model = "gpt-4o-mini";
  int max_tokens = 4;
  int top_logprobs = 20;
  int max_attempts = 5;
  int backoff_base_ms = 1000;
  int timeout_s = 60;
  std::uint64_t jitter_seed = 0;
};

// OpenAI-compatible chat-completions backend. Label-word scores are read from
// the first answer token's top logprobs: a returned token counts toward a
// label word when its trimmed lowercase text is a nonempty prefix of exactly
// that word, which aggregates multi-token label words by their first distinct
// token. A label word with no matching token gets floor mass 1e-6 and the
// response is flagged.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  std::string id() const override;
  std::vector<double> logits(const ClassifyRequest& req) override;
  bool last_floored() const override { return last_floored_; }

  // Exact request body sent over the wire (golden-file tested).
  static std::string build_request_json(const std::string& model, const std::string& assembled,
                                        double temperature, int max_tokens, int top_logprobs);

  // Parses a chat-completions response body into per-label log-scores.
  static std::vector<double> extract_label_logits(const std::string& response_body,
                                                  const LabelSpace& labels, bool* floored);

  static constexpr double kFloorMass = 1e-6;

 private:
  HttpBackendConfig config_;
  bool last_floored_ = false;
};

}  // namespace ppd
