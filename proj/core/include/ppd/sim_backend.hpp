#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "ppd/gateway.hpp"

namespace ppd {

// Deterministic offline stand-in for a black-box LLM. Each token belongs to
// at most one label word (explicit assignment, or seeded hashing); the logit
// for a class grows with the fraction of query and prompt tokens assigned to
// it and with the fraction of demonstrations carrying its label. Everything
// is a pure function of the seed, so identical requests always produce
// identical responses, and responses are permutation-equivariant in the
// label words.
struct SimBackendConfig {
  std::uint64_t seed = 0;
  double query_weight = 8.0;
  double prompt_weight = 4.0;
  double demo_weight = 1.5;
  // Per-label-word bias drawn uniformly from [-bias_scale, bias_scale] unless
  // overridden; models the class priors the bias-reduced confidence corrects.
  double bias_scale = 0.5;
  std::map<std::string, std::string> token_class;  // token -> label word
  std::map<std::string, double> bias_override;     // label word -> bias
  bool hash_unassigned = true;
};

class SimulatedBackend : public Backend {
 public:
  explicit SimulatedBackend(SimBackendConfig config = {});

  std::string id() const override;
  std::vector<double> logits(const ClassifyRequest& req) override;

  // Label word the token counts toward, if any.
  std::optional<std::string> token_label(const std::string& token, const LabelSpace& labels) const;
  double bias(const std::string& label_word) const;

 private:
  SimBackendConfig config_;
};

}  // namespace ppd
