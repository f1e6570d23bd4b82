#include "ppd/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ppd/errors.hpp"
#include "ppd/hash.hpp"
#include "ppd/io.hpp"

namespace ppd {

using json = nlohmann::ordered_json;

void ConfidenceConfig::validate() const {
  if (temperatures.empty()) throw std::invalid_argument("temperature set T must be nonempty");
  for (double t : temperatures)
    if (!(t > 0.0)) throw std::invalid_argument("temperature candidates must be > 0");
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must be in [0, 1]");
  if (mode == ConfidenceMode::RD && random_contexts < 1)
    throw std::invalid_argument("RD mode needs at least one random context");
}

std::vector<double> normalize(const std::vector<double>& scores) {
  double sum = 0.0;
  for (double s : scores) {
    if (!std::isfinite(s) || s < 0.0)
      throw std::invalid_argument("normalize: scores must be finite and nonnegative");
    sum += s;
  }
  if (sum <= 0.0) throw std::invalid_argument("normalize: scores are all zero");
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] / sum;
  return out;
}

std::vector<double> normalize(const ClassifierResponse& response) {
  return normalize(response.scores);
}

static ConfidenceScore max_with_tiebreak(const std::vector<double>& values) {
  ConfidenceScore result;
  result.label = 0;
  result.confidence = values.at(0);
  for (std::size_t c = 1; c < values.size(); ++c) {
    if (values[c] > result.confidence) {
      result.confidence = values[c];
      result.label = c;
    }
  }
  return result;
}

ConfidenceScore lg_score(Gateway& gateway, const Fields& query, const std::string& prompt_text,
                         const std::vector<double>& temperatures) {
  if (temperatures.empty()) throw std::invalid_argument("temperature set T must be nonempty");
  std::vector<double> mean;
  for (double t : temperatures) {
    const auto probs = normalize(gateway.classify(query, prompt_text, {}, t));
    if (mean.empty()) mean.assign(probs.size(), 0.0);
    for (std::size_t c = 0; c < probs.size(); ++c) mean[c] += probs[c];
  }
  for (double& v : mean) v /= static_cast<double>(temperatures.size());
  return max_with_tiebreak(mean);
}

ConfidenceScore rd_score(Gateway& gateway, const Fields& query, const std::string& prompt_text,
                         const ConfidenceConfig& config, const std::vector<Fields>& corpus,
                         std::uint64_t seed) {
  if (corpus.empty()) throw std::invalid_argument("rd_score needs a nonempty corpus");
  const std::size_t r = std::min<std::size_t>(config.random_contexts, corpus.size());

  // Whole examples drawn uniformly without replacement, fixed by the seed so
  // every query shares the same contexts (and their cached responses).
  Rng rng = Rng::fork(seed, {0x7d5a'c0de});
  std::vector<std::size_t> pool(corpus.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  std::vector<std::size_t> picked;
  for (std::size_t i = 0; i < r; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    picked.push_back(pool[i]);
  }

  const double numerator_t = config.rd_soft_numerator ? 1.0 : 0.0;
  const auto numerator = normalize(gateway.classify(query, prompt_text, {}, numerator_t));

  std::vector<double> baseline(numerator.size(), 0.0);
  std::size_t samples = 0;
  for (std::size_t ctx : picked) {
    for (double t : config.temperatures) {
      const auto probs = normalize(gateway.classify(corpus[ctx], prompt_text, {}, t));
      for (std::size_t c = 0; c < probs.size(); ++c) baseline[c] += probs[c];
      ++samples;
    }
  }
  for (double& v : baseline) v /= static_cast<double>(samples);

  std::vector<double> ratio(numerator.size());
  for (std::size_t c = 0; c < ratio.size(); ++c)
    ratio[c] = baseline[c] > 0.0 ? numerator[c] / baseline[c] : 0.0;

  if (config.raw_rd) return max_with_tiebreak(ratio);
  return max_with_tiebreak(normalize(ratio));
}

std::vector<PseudoLabelRecord> select_reliable(std::vector<PseudoLabelRecord>& records,
                                               double gamma, ConfidenceMode mode) {
  std::vector<PseudoLabelRecord> selected;
  for (auto& rec : records) {
    const double score = mode == ConfidenceMode::LG ? rec.c_lg : rec.c_rd;
    rec.reliable = score >= gamma;
    if (rec.reliable) selected.push_back(rec);
  }
  if (selected.empty())
    throw std::runtime_error("no example reached confidence threshold gamma=" +
                             std::to_string(gamma) + "; lower --gamma to proceed");
  return selected;
}

ReliableSummary summarize_reliable(const std::vector<PseudoLabelRecord>& records,
                                   std::size_t num_classes) {
  ReliableSummary summary;
  summary.total = records.size();
  summary.per_class.assign(num_classes, 0);
  for (const auto& rec : records) {
    if (!rec.reliable) continue;
    ++summary.reliable;
    if (rec.zero_shot_label < num_classes) ++summary.per_class[rec.zero_shot_label];
  }
  return summary;
}

void save_store(const std::vector<PseudoLabelRecord>& records, const std::string& config_hash,
                const std::string& path) {
  std::string out;
  json meta;
  meta["type"] = "meta";
  meta["version"] = 1;
  meta["config_hash"] = config_hash;
  out += meta.dump();
  out += '\n';
  for (const auto& rec : records) {
    json line;
    line["example_id"] = rec.example_id;
    line["text_hash"] = rec.text_hash;
    line["zero_shot_label"] = rec.zero_shot_label;
    line["c_lg"] = rec.c_lg;
    line["c_rd"] = rec.c_rd;
    line["reliable"] = rec.reliable;
    if (rec.learned_label)
      line["learned_label"] = *rec.learned_label;
    else
      line["learned_label"] = nullptr;
    out += line.dump();
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<PseudoLabelRecord> load_store(const std::string& path, std::string* config_hash_out) {
  const std::string content = read_file(path);
  std::vector<PseudoLabelRecord> records;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    const std::string line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const std::exception& ex) {
      throw LoadError(path + ":" + std::to_string(line_no) + ": " + ex.what());
    }
    if (rec.value("type", "") == "meta") {
      if (config_hash_out) *config_hash_out = rec.value("config_hash", "");
      continue;
    }
    PseudoLabelRecord r;
    r.example_id = rec.at("example_id").get<std::string>();
    r.text_hash = rec.value("text_hash", "");
    r.zero_shot_label = rec.at("zero_shot_label").get<std::size_t>();
    r.c_lg = rec.value("c_lg", 0.0);
    r.c_rd = rec.value("c_rd", 0.0);
    r.reliable = rec.at("reliable").get<bool>();
    if (rec.contains("learned_label") && !rec.at("learned_label").is_null())
      r.learned_label = rec.at("learned_label").get<std::size_t>();
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace ppd
