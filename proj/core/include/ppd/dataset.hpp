#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppd/gateway.hpp"

namespace ppd {

struct Example {
  std::string id;
  Fields fields;
  // Evaluation-only; never visible to scoring or training.
  std::optional<std::string> gold_label;
};

struct Dataset {
  std::vector<Example> examples;
  std::string task_id;
  TaskTemplate tmpl;
  LabelSpace labels;

  const Example& by_id(const std::string& id) const;
  bool has(const std::string& id) const;

  // Field values in template order joined by single spaces; the text used for
  // hashing, embeddings and n-gram counting.
  std::string full_text(const Example& ex) const;
  std::vector<std::string> corpus_texts() const;
  std::vector<Fields> corpus_fields() const;

  std::optional<std::size_t> gold_class(const Example& ex) const;  // resolves label word or index

  void validate() const;  // unique ids, all template fields present

 private:
  mutable std::map<std::string, std::size_t> index_;
  void build_index() const;
};

enum class DataFormat { Jsonl, Tsv };

// JSONL: one object per line, keys are template placeholders; "id" is the
// example id (row order otherwise); "label" is quarantined as the gold label.
// TSV: header row names the columns, same key conventions.
Dataset load_dataset(const std::string& path, DataFormat format, const TaskTemplate& tmpl,
                     const LabelSpace& labels, const std::string& task_id);

}  // namespace ppd
