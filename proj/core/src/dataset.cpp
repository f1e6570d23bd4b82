#include "ppd/dataset.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ppd/errors.hpp"
#include "ppd/io.hpp"
#include "ppd/text.hpp"

namespace ppd {

using json = nlohmann::ordered_json;

void Dataset::build_index() const {
  if (!index_.empty() || examples.empty()) return;
  for (std::size_t i = 0; i < examples.size(); ++i) index_[examples[i].id] = i;
}

const Example& Dataset::by_id(const std::string& id) const {
  build_index();
  auto it = index_.find(id);
  if (it == index_.end()) throw std::invalid_argument("unknown example id: " + id);
  return examples[it->second];
}

bool Dataset::has(const std::string& id) const {
  build_index();
  return index_.count(id) > 0;
}

std::string Dataset::full_text(const Example& ex) const {
  std::vector<std::string> values;
  for (const auto& name : tmpl.field_names) {
    auto it = ex.fields.find(name);
    if (it != ex.fields.end()) values.push_back(it->second);
  }
  return join(values, " ");
}

std::vector<std::string> Dataset::corpus_texts() const {
  std::vector<std::string> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(full_text(ex));
  return out;
}

std::vector<Fields> Dataset::corpus_fields() const {
  std::vector<Fields> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(ex.fields);
  return out;
}

std::optional<std::size_t> Dataset::gold_class(const Example& ex) const {
  if (!ex.gold_label) return std::nullopt;
  const std::string lowered = lowercase(*ex.gold_label);
  for (std::size_t c = 0; c < labels.num_classes(); ++c)
    if (lowercase(labels.label_words[c]) == lowered) return c;
  // Numeric class index fallback.
  try {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(*ex.gold_label, &pos);
    if (pos == ex.gold_label->size() && v < labels.num_classes()) return v;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

void Dataset::validate() const {
  tmpl.validate();
  labels.validate();
  std::set<std::string> ids;
  for (const auto& ex : examples) {
    if (!ids.insert(ex.id).second) throw LoadError("duplicate example id: " + ex.id);
    for (const auto& name : tmpl.field_names)
      if (!ex.fields.count(name))
        throw LoadError("example " + ex.id + " is missing template field: " + name);
  }
}

namespace {

Dataset finish(std::vector<Example> examples, const TaskTemplate& tmpl, const LabelSpace& labels,
               const std::string& task_id, const std::string& path) {
  if (examples.empty()) throw LoadError(path + ": no examples loaded");
  Dataset ds;
  ds.examples = std::move(examples);
  ds.task_id = task_id;
  ds.tmpl = tmpl;
  ds.labels = labels;
  ds.validate();
  return ds;
}

Dataset load_jsonl(const std::string& path, const TaskTemplate& tmpl, const LabelSpace& labels,
                   const std::string& task_id) {
  const std::string content = read_file(path);
  std::vector<Example> examples;
  std::size_t start = 0, line_no = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    const std::string line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const std::exception& ex) {
      throw LoadError(path + ":" + std::to_string(line_no) + ": " + ex.what());
    }
    Example ex;
    ex.id = std::to_string(examples.size());
    for (const auto& [key, value] : row.items()) {
      const std::string text = value.is_string() ? value.get<std::string>() : value.dump();
      if (key == "id" || key == "example_id")
        ex.id = text;
      else if (key == "label" || key == "gold_label")
        ex.gold_label = text;
      else
        ex.fields[key] = text;
    }
    for (const auto& name : tmpl.field_names)
      if (!ex.fields.count(name))
        throw LoadError(path + ":" + std::to_string(line_no) +
                        ": missing template field: " + name);
    examples.push_back(std::move(ex));
  }
  return finish(std::move(examples), tmpl, labels, task_id, path);
}

std::vector<std::string> split_tsv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == '\t') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

Dataset load_tsv(const std::string& path, const TaskTemplate& tmpl, const LabelSpace& labels,
                 const std::string& task_id) {
  const std::string content = read_file(path);
  std::vector<Example> examples;
  std::vector<std::string> header;
  std::size_t start = 0, line_no = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    const std::string line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto cells = split_tsv(line);
    if (header.empty()) {
      header = std::move(cells);
      continue;
    }
    if (cells.size() != header.size())
      throw LoadError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " columns, got " +
                      std::to_string(cells.size()));
    Example ex;
    ex.id = std::to_string(examples.size());
    for (std::size_t i = 0; i < header.size(); ++i) {
      const std::string& key = header[i];
      if (key == "id" || key == "example_id")
        ex.id = cells[i];
      else if (key == "label" || key == "gold_label")
        ex.gold_label = cells[i];
      else
        ex.fields[key] = cells[i];
    }
    for (const auto& name : tmpl.field_names)
      if (!ex.fields.count(name))
        throw LoadError(path + ":" + std::to_string(line_no) +
                        ": missing template field: " + name);
    examples.push_back(std::move(ex));
  }
  if (header.empty()) throw LoadError(path + ": empty file");
  return finish(std::move(examples), tmpl, labels, task_id, path);
}

}  // namespace

Dataset load_dataset(const std::string& path, DataFormat format, const TaskTemplate& tmpl,
                     const LabelSpace& labels, const std::string& task_id) {
  switch (format) {
    case DataFormat::Jsonl:
      return load_jsonl(path, tmpl, labels, task_id);
    case DataFormat::Tsv:
      return load_tsv(path, tmpl, labels, task_id);
  }
  throw std::invalid_argument("unknown data format");
}

}  // namespace ppd
