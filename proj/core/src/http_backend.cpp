#ifdef PPD_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "ppd/http_backend.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "ppd/errors.hpp"
#include "ppd/hash.hpp"
#include "ppd/text.hpp"

namespace ppd {

using json = nlohmann::ordered_json;

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  if (config_.max_tokens < 1 || config_.max_tokens > 4)
    throw std::invalid_argument("max_tokens must be in [1, 4]");
}

std::string HttpBackend::id() const { return "http:" + config_.base_url + ":" + config_.model; }

std::string HttpBackend::build_request_json(const std::string& model, const std::string& assembled,
                                            double temperature, int max_tokens,
                                            int top_logprobs) {
  json body;
  body["model"] = model;
  body["messages"] = json::array({json{{"role", "user"}, {"content", assembled}}});
  body["max_tokens"] = max_tokens;
  body["logprobs"] = true;
  body["top_logprobs"] = top_logprobs;
  body["temperature"] = temperature;
  return body.dump();
}

namespace {

// True when `token`, trimmed of surrounding whitespace and lowercased, is a
// nonempty prefix of the lowercase label word.
bool token_matches_label(const std::string& token, const std::string& label_lower) {
  std::size_t begin = 0, end = token.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(token[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(token[end - 1]))) --end;
  if (begin == end) return false;
  const std::string trimmed = lowercase(token.substr(begin, end - begin));
  if (trimmed.size() > label_lower.size()) return false;
  return label_lower.compare(0, trimmed.size(), trimmed) == 0;
}

}  // namespace

std::vector<double> HttpBackend::extract_label_logits(const std::string& response_body,
                                                      const LabelSpace& labels, bool* floored) {
  json doc;
  try {
    doc = json::parse(response_body);
  } catch (const std::exception& ex) {
    throw GatewayError(std::string("malformed completion response: ") + ex.what());
  }

  std::vector<std::string> lowered;
  lowered.reserve(labels.num_classes());
  for (const auto& w : labels.label_words) lowered.push_back(lowercase(w));

  std::vector<double> mass(labels.num_classes(), 0.0);
  try {
    const auto& content = doc.at("choices").at(0).at("logprobs").at("content");
    if (content.empty()) throw GatewayError("completion response has no logprob content");
    for (const auto& entry : content.at(0).at("top_logprobs")) {
      const std::string token = entry.at("token").get<std::string>();
      const double lp = entry.at("logprob").get<double>();
      // A token belonging to more than one label word is ambiguous and
      // dropped; "first distinct token" aggregation.
      std::size_t match = labels.num_classes();
      bool ambiguous = false;
      for (std::size_t c = 0; c < lowered.size(); ++c) {
        if (token_matches_label(token, lowered[c])) {
          if (match != labels.num_classes()) ambiguous = true;
          match = c;
        }
      }
      if (!ambiguous && match != labels.num_classes()) mass[match] += std::exp(lp);
    }
  } catch (const json::exception& ex) {
    throw GatewayError(std::string("completion response missing logprobs: ") + ex.what());
  }

  bool any_floored = false;
  std::vector<double> out(labels.num_classes());
  for (std::size_t c = 0; c < mass.size(); ++c) {
    if (mass[c] <= 0.0) {
      mass[c] = kFloorMass;
      any_floored = true;
    }
    out[c] = std::log(mass[c]);
  }
  if (floored) *floored = any_floored;
  return out;
}

namespace {

bool retryable_status(int status) {
  return status == 408 || status == 409 || status == 429 || status >= 500;
}

// Splits "https://host:port/prefix" into client target and path prefix.
void split_url(const std::string& url, std::string* origin, std::string* prefix) {
  std::size_t scheme = url.find("://");
  std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  std::size_t path_start = url.find('/', host_start);
  if (path_start == std::string::npos) {
    *origin = url;
    *prefix = "";
  } else {
    *origin = url.substr(0, path_start);
    *prefix = url.substr(path_start);
    while (!prefix->empty() && prefix->back() == '/') prefix->pop_back();
  }
}

}  // namespace

std::vector<double> HttpBackend::logits(const ClassifyRequest& req) {
  if (req.labels == nullptr) throw std::invalid_argument("http backend needs a label space");
  const std::string body = build_request_json(config_.model, req.assembled, req.temperature,
                                              config_.max_tokens, config_.top_logprobs);

  std::string origin, prefix;
  split_url(config_.base_url, &origin, &prefix);

  Rng jitter(config_.jitter_seed ^ fnv1a64(req.assembled));
  std::string last_error;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (attempt > 0) {
      const auto delay_ms = static_cast<std::int64_t>(
          config_.backoff_base_ms * (1LL << (attempt - 1)) + jitter.next_below(250));
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    }

    httplib::Client client(origin);
    client.set_connection_timeout(config_.timeout_s);
    client.set_read_timeout(config_.timeout_s);
    httplib::Headers headers;
    if (!config_.api_key.empty())
      headers.emplace("Authorization", "Bearer " + config_.api_key);

    auto result = client.Post(prefix + "/chat/completions", headers, body, "application/json");
    if (!result) {
      last_error = "transport error: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status == 200) {
      last_floored_ = false;
      return extract_label_logits(result->body, *req.labels, &last_floored_);
    }
    last_error = "HTTP " + std::to_string(result->status) + ": " + result->body;
    if (!retryable_status(result->status)) throw GatewayError(last_error);
  }
  throw GatewayError("gave up after " + std::to_string(config_.max_attempts) +
                     " attempts; last error: " + last_error);
}

}  // namespace ppd
