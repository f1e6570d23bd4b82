#include "ppd/gateway.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "ppd/errors.hpp"
#include "ppd/hash.hpp"
#include "ppd/io.hpp"
#include "ppd/text.hpp"

namespace ppd {

using json = nlohmann::ordered_json;

std::string LabelSpace::options_text() const { return join(label_words, ", "); }

void LabelSpace::validate() const {
  if (label_words.size() < 2) throw std::invalid_argument("label space needs at least 2 label words");
  std::set<std::string> seen;
  for (const auto& w : label_words) {
    if (w.empty()) throw std::invalid_argument("empty label word");
    if (!seen.insert(lowercase(w)).second)
      throw std::invalid_argument("label words must be case-insensitively distinct: " + w);
  }
}

void TaskTemplate::validate() const {
  if (body.find("{options}") == std::string::npos)
    throw std::invalid_argument("template body must contain {options}");
  const std::string suffix = "Answer:";
  if (body.size() < suffix.size() || body.compare(body.size() - suffix.size(), suffix.size(), suffix) != 0)
    throw std::invalid_argument("template body must end with \"Answer:\"");
}

TaskTemplate TaskTemplate::from_body(std::string name, std::string body) {
  TaskTemplate tmpl;
  tmpl.name = std::move(name);
  tmpl.body = std::move(body);
  std::size_t pos = 0;
  while ((pos = tmpl.body.find('{', pos)) != std::string::npos) {
    const std::size_t end = tmpl.body.find('}', pos);
    if (end == std::string::npos) break;
    std::string field = tmpl.body.substr(pos + 1, end - pos - 1);
    if (field != "options") tmpl.field_names.push_back(std::move(field));
    pos = end + 1;
  }
  tmpl.validate();
  return tmpl;
}

std::string render_template(const TaskTemplate& tmpl, const Fields& fields,
                            const LabelSpace& labels) {
  std::string out = tmpl.body;
  std::size_t pos = 0;
  while ((pos = out.find('{', pos)) != std::string::npos) {
    const std::size_t end = out.find('}', pos);
    if (end == std::string::npos) break;
    const std::string name = out.substr(pos + 1, end - pos - 1);
    std::string value;
    if (name == "options") {
      value = labels.options_text();
    } else {
      auto it = fields.find(name);
      if (it == fields.end())
        throw std::invalid_argument("template field missing from record: " + name);
      value = it->second;
    }
    out.replace(pos, end - pos + 1, value);
    pos += value.size();
  }
  return out;
}

Demonstration make_demo(const TaskTemplate& tmpl, std::string text, std::size_t pseudo_label) {
  if (tmpl.field_names.size() != 1)
    throw std::invalid_argument("make_demo requires a single-field template");
  Demonstration demo;
  demo.fields[tmpl.field_names[0]] = std::move(text);
  demo.pseudo_label = pseudo_label;
  return demo;
}

void ClassifierResponse::validate() const {
  if (scores.empty()) throw std::invalid_argument("empty classifier response");
  double sum = 0.0;
  for (double s : scores) {
    if (!std::isfinite(s) || s < 0.0)
      throw std::invalid_argument("classifier scores must be finite and nonnegative");
    sum += s;
  }
  if (sum <= 0.0) throw std::invalid_argument("classifier scores are all zero");
}

std::vector<double> temperature_scale(const std::vector<double>& logits, double t) {
  if (t < 0.0) throw std::invalid_argument("temperature must be >= 0");
  for (double l : logits)
    if (!std::isfinite(l)) throw std::invalid_argument("temperature_scale: nonfinite logit");
  std::vector<double> out(logits.size());
  if (t == 0.0) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < logits.size(); ++c)
      if (logits[c] > logits[best]) best = c;
    out.assign(logits.size(), 0.0);
    out[best] = 1.0;
    return out;
  }
  // Overflow guard only; rescaling is skipped otherwise so small examples
  // keep the plain exp(l/t) values.
  double max_scaled = -std::numeric_limits<double>::infinity();
  for (double l : logits) max_scaled = std::max(max_scaled, l / t);
  const double shift = max_scaled > 700.0 ? max_scaled : 0.0;
  for (std::size_t c = 0; c < logits.size(); ++c) out[c] = std::exp(logits[c] / t - shift);
  return out;
}

std::string assemble_input(const Fields& query, const std::string& prompt_text,
                           const std::vector<Demonstration>& demos, const TaskTemplate& tmpl,
                           const LabelSpace& labels) {
  std::vector<std::string> blocks;
  if (!prompt_text.empty()) blocks.push_back(prompt_text);
  for (const auto& demo : demos) {
    if (demo.pseudo_label >= labels.num_classes())
      throw std::invalid_argument("demonstration label out of range");
    blocks.push_back(render_template(tmpl, demo.fields, labels) + " " +
                     labels.label_words[demo.pseudo_label]);
  }
  blocks.push_back(render_template(tmpl, query, labels));
  return join(blocks, "\n");
}

Gateway::Gateway(std::shared_ptr<Backend> backend, TaskTemplate tmpl, LabelSpace labels,
                 GatewayOptions options)
    : backend_(std::move(backend)),
      tmpl_(std::move(tmpl)),
      labels_(std::move(labels)),
      options_(std::move(options)),
      bucket_refill_(std::chrono::steady_clock::now()) {
  tmpl_.validate();
  labels_.validate();
  bucket_tokens_ = options_.rate_limit_qps;
  if (!options_.cache_path.empty() && file_exists(options_.cache_path)) load_cache();
}

std::string Gateway::cache_key(const std::string& assembled, double temperature) const {
  std::uint64_t h = fnv1a64(backend_->id());
  h = hash_combine(h, fnv1a64(assembled));
  h = hash_combine(h, fnv1a64(std::to_string(temperature)));
  return to_hex(h);
}

void Gateway::load_cache() {
  const std::string content = read_file(options_.cache_path);
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    const std::string line = content.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.contains("key_hash")) continue;
    CacheEntry entry;
    entry.scores = rec.at("scores").get<std::vector<double>>();
    if (rec.contains("raw_logprobs") && !rec.at("raw_logprobs").is_null())
      entry.raw_logprobs = rec.at("raw_logprobs").get<std::vector<double>>();
    entry.floored = rec.value("floored", false);
    cache_[rec.at("key_hash").get<std::string>()] = std::move(entry);
  }
}

void Gateway::persist(const std::string& key, const CacheEntry& entry) {
  if (options_.cache_path.empty()) return;
  json rec;
  rec["key_hash"] = key;
  rec["scores"] = entry.scores;
  if (entry.raw_logprobs)
    rec["raw_logprobs"] = *entry.raw_logprobs;
  else
    rec["raw_logprobs"] = nullptr;
  rec["floored"] = entry.floored;
  rec["timestamp"] = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());
  append_line(options_.cache_path, rec.dump());
}

ClassifierResponse Gateway::classify(const Fields& query, const std::string& prompt_text,
                                     const std::vector<Demonstration>& demos, double temperature) {
  const std::string assembled = assemble_input(query, prompt_text, demos, tmpl_, labels_);
  const std::string key = cache_key(assembled, temperature);

  double wait_s = 0.0;
  {
    std::unique_lock<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      ++stats_.cache_hits;
      ClassifierResponse resp{it->second.scores, it->second.raw_logprobs, it->second.floored};
      return resp;
    }
    if (options_.max_backend_calls > 0 && stats_.backend_calls >= options_.max_backend_calls)
      throw BudgetExhausted("backend call budget of " +
                            std::to_string(options_.max_backend_calls) + " exhausted");
    ++stats_.backend_calls;
    stats_.estimated_tokens += assembled.size() / 4 + 4;
    if (options_.rate_limit_qps > 0.0) {
      // Token bucket shared across workers; refill under the lock, sleep
      // outside it.
      const auto now = std::chrono::steady_clock::now();
      bucket_tokens_ = std::min(options_.rate_limit_qps,
                                bucket_tokens_ + options_.rate_limit_qps *
                                                     std::chrono::duration<double>(now - bucket_refill_).count());
      bucket_refill_ = now;
      if (bucket_tokens_ >= 1.0) {
        bucket_tokens_ -= 1.0;
      } else {
        wait_s = (1.0 - bucket_tokens_) / options_.rate_limit_qps;
        bucket_tokens_ = 0.0;
      }
    }
  }
  if (wait_s > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(wait_s));

  ClassifyRequest req;
  req.assembled = assembled;
  std::vector<std::string> values;
  for (const auto& name : tmpl_.field_names) {
    auto it = query.find(name);
    if (it != query.end()) values.push_back(it->second);
  }
  req.query_text = join(values, " ");
  req.prompt_text = prompt_text;
  req.demos = demos;
  req.labels = &labels_;
  req.temperature = temperature;

  const std::vector<double> raw = backend_->logits(req);
  if (raw.size() != labels_.num_classes())
    throw GatewayError("backend returned " + std::to_string(raw.size()) + " logits, expected " +
                       std::to_string(labels_.num_classes()));

  ClassifierResponse resp;
  resp.raw_logprobs = raw;
  resp.scores = temperature_scale(raw, temperature);
  resp.floored = backend_->last_floored();
  resp.validate();

  {
    std::lock_guard<std::mutex> lock(mu_);
    CacheEntry entry{resp.scores, resp.raw_logprobs, resp.floored};
    auto [it, inserted] = cache_.emplace(key, std::move(entry));
    if (inserted) persist(key, it->second);
  }
  return resp;
}

GatewayStats Gateway::stats() const {
  std::lock_guard<std::mutex> lock(mu_);
  return stats_;
}

}  // namespace ppd
