#include "ppd/sim_backend.hpp"

#include <stdexcept>

#include "ppd/hash.hpp"
#include "ppd/text.hpp"

namespace ppd {

SimulatedBackend::SimulatedBackend(SimBackendConfig config) : config_(std::move(config)) {}

std::string SimulatedBackend::id() const { return "sim:" + std::to_string(config_.seed); }

std::optional<std::string> SimulatedBackend::token_label(const std::string& token,
                                                         const LabelSpace& labels) const {
  auto it = config_.token_class.find(token);
  if (it != config_.token_class.end()) return it->second;
  if (!config_.hash_unassigned) return std::nullopt;
  // Seeded affinity keyed by (token, label word), so permuting the label
  // word list permutes the scores and nothing else.
  std::string best;
  std::uint64_t best_h = 0;
  for (const auto& w : labels.label_words) {
    std::uint64_t h = fnv1a64(token);
    h = hash_combine(h, fnv1a64(w));
    h = hash_combine(h, config_.seed);
    if (best.empty() || h > best_h || (h == best_h && w < best)) {
      best = w;
      best_h = h;
    }
  }
  return best;
}

double SimulatedBackend::bias(const std::string& label_word) const {
  auto it = config_.bias_override.find(label_word);
  if (it != config_.bias_override.end()) return it->second;
  const std::uint64_t h = hash_combine(fnv1a64(label_word), config_.seed ^ 0xb1a5e5ULL);
  const double u = static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53;
  return (2.0 * u - 1.0) * config_.bias_scale;
}

std::vector<double> SimulatedBackend::logits(const ClassifyRequest& req) {
  if (req.labels == nullptr) throw std::invalid_argument("simulated backend needs a label space");
  const LabelSpace& labels = *req.labels;

  const auto query_tokens = tokenize(req.query_text);
  const auto prompt_tokens = tokenize(req.prompt_text);

  std::map<std::string, double> query_overlap, prompt_overlap;
  for (const auto& t : query_tokens)
    if (auto w = token_label(t, labels)) query_overlap[*w] += 1.0;
  for (const auto& t : prompt_tokens)
    if (auto w = token_label(t, labels)) prompt_overlap[*w] += 1.0;
  const double qn = query_tokens.empty() ? 1.0 : static_cast<double>(query_tokens.size());
  const double pn = prompt_tokens.empty() ? 1.0 : static_cast<double>(prompt_tokens.size());

  std::vector<double> out;
  out.reserve(labels.num_classes());
  for (std::size_t c = 0; c < labels.num_classes(); ++c) {
    const std::string& w = labels.label_words[c];
    double agreement = 0.0;
    if (!req.demos.empty()) {
      for (const auto& demo : req.demos)
        if (demo.pseudo_label == c) agreement += 1.0;
      agreement /= static_cast<double>(req.demos.size());
    }
    double q = 0.0, p = 0.0;
    if (auto it = query_overlap.find(w); it != query_overlap.end()) q = it->second / qn;
    if (auto it = prompt_overlap.find(w); it != prompt_overlap.end()) p = it->second / pn;
    out.push_back(config_.query_weight * q + config_.prompt_weight * p +
                  config_.demo_weight * agreement + bias(w));
  }
  return out;
}

}  // namespace ppd
