#include "ppd/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ppd/errors.hpp"
#include "ppd/io.hpp"
#include "ppd/text.hpp"

namespace ppd {

using json = nlohmann::ordered_json;

NgramStats count_ngrams(const std::vector<std::string>& corpus) {
  if (corpus.empty()) throw std::invalid_argument("corpus must be nonempty");
  NgramStats stats;
  for (const auto& sentence : corpus) {
    const auto words = tokenize(sentence);
    for (std::size_t i = 0; i < words.size(); ++i) {
      ++stats.unigram_counts[words[i]];
      ++stats.total_unigrams;
      if (i + 1 < words.size()) {
        ++stats.bigram_counts[{words[i], words[i + 1]}];
        ++stats.total_bigrams;
      }
    }
  }
  return stats;
}

double pmi(const std::string& x1, const std::string& x2, const NgramStats& stats) {
  auto u1 = stats.unigram_counts.find(x1);
  auto u2 = stats.unigram_counts.find(x2);
  if (u1 == stats.unigram_counts.end() || u2 == stats.unigram_counts.end())
    throw std::invalid_argument("pmi: unknown word");
  auto bg = stats.bigram_counts.find({x1, x2});
  if (bg == stats.bigram_counts.end() || stats.total_bigrams == 0)
    return -std::numeric_limits<double>::infinity();
  const double p_joint = static_cast<double>(bg->second) / static_cast<double>(stats.total_bigrams);
  const double p1 = static_cast<double>(u1->second) / static_cast<double>(stats.total_unigrams);
  const double p2 = static_cast<double>(u2->second) / static_cast<double>(stats.total_unigrams);
  return std::log(p_joint / (p1 * p2));
}

static double pair_pmi_or_neg_inf(const std::string& a, const std::string& b,
                                  const NgramStats& stats) {
  if (!stats.unigram_counts.count(a) || !stats.unigram_counts.count(b))
    return -std::numeric_limits<double>::infinity();
  return pmi(a, b, stats);
}

std::vector<std::string> segment(const std::string& sentence, const NgramStats& stats,
                                 double pmi_threshold) {
  const auto words = tokenize(sentence);
  std::vector<std::string> ngrams;
  std::string current;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (current.empty()) {
      current = words[i];
    } else if (pair_pmi_or_neg_inf(words[i - 1], words[i], stats) >= pmi_threshold) {
      current += ' ';
      current += words[i];
    } else {
      ngrams.push_back(std::move(current));
      current = words[i];
    }
  }
  if (!current.empty()) ngrams.push_back(std::move(current));
  return ngrams;
}

Vocabulary build_vocabulary(const std::vector<std::string>& corpus, const VocabParams& params) {
  const NgramStats stats = count_ngrams(corpus);
  std::map<std::string, std::uint64_t> ngram_counts;
  for (const auto& sentence : corpus)
    for (auto& ng : segment(sentence, stats, params.pmi_threshold)) ++ngram_counts[ng];

  std::vector<std::pair<std::string, std::uint64_t>> survivors;
  for (const auto& [ngram, count] : ngram_counts)
    if (count >= params.min_frequency) survivors.emplace_back(ngram, count);
  if (survivors.empty())
    throw std::runtime_error(
        "vocabulary build produced no n-gram with frequency >= " +
        std::to_string(params.min_frequency) + "; lower delta (--vocab-delta)");

  std::sort(survivors.begin(), survivors.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (survivors.size() > params.n_max) survivors.resize(params.n_max);

  Vocabulary vocab;
  vocab.entries.reserve(survivors.size());
  for (auto& [ngram, count] : survivors) vocab.entries.push_back(std::move(ngram));
  vocab.validate();
  return vocab;
}

static std::string vocab_to_string(const Vocabulary& vocab, const VocabParams& params) {
  json doc;
  doc["version"] = 1;
  doc["params"] = {{"delta", params.min_frequency},
                   {"pmi_threshold", params.pmi_threshold},
                   {"n_max", params.n_max}};
  doc["entries"] = vocab.entries;
  return doc.dump() + "\n";
}

void save_vocabulary(const Vocabulary& vocab, const VocabParams& params, const std::string& path) {
  write_file_atomic(path, vocab_to_string(vocab, params));
}

Vocabulary load_vocabulary(const std::string& path, VocabParams* params_out) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const std::exception& ex) {
    throw LoadError("vocabulary " + path + ": " + ex.what());
  }
  if (doc.value("version", 0) != 1) throw LoadError("vocabulary " + path + ": unsupported version");
  Vocabulary vocab;
  vocab.entries = doc.at("entries").get<std::vector<std::string>>();
  vocab.validate();
  if (params_out) {
    const auto& p = doc.at("params");
    params_out->min_frequency = p.at("delta").get<std::uint64_t>();
    params_out->pmi_threshold = p.at("pmi_threshold").get<double>();
    params_out->n_max = p.at("n_max").get<std::size_t>();
  }
  return vocab;
}

std::string vocab_file_hash(const std::string& path) { return to_hex(fnv1a64(read_file(path))); }

}  // namespace ppd
