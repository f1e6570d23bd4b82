#include "ppd/tasks.hpp"

#include <stdexcept>

namespace ppd {

namespace {

TaskSpec make_task(std::string id, std::string body, std::vector<std::string> label_words,
                   std::size_t prompt_length, double learning_rate, std::size_t demos) {
  TaskSpec spec;
  spec.id = id;
  spec.tmpl = TaskTemplate::from_body(std::move(id), std::move(body));
  spec.labels.label_words = std::move(label_words);
  spec.labels.validate();
  spec.default_prompt_length = prompt_length;
  spec.default_learning_rate = learning_rate;
  spec.default_demos = demos;
  return spec;
}

std::vector<TaskSpec> build_all() {
  std::vector<TaskSpec> tasks;
  tasks.push_back(make_task("sst2", "Review: {sentence}, Options: {options}. Answer:",
                            {"positive", "negative"}, 50, 4e-4, 3));
  tasks.push_back(make_task("cola", "Sentence: {sentence} Options: {options}. Answer:",
                            {"acceptable", "unacceptable"}, 50, 2e-4, 5));
  tasks.push_back(make_task(
      "mnli", "Premise: {premise}\nHypothesis: {hypothesis}\nOptions: {options}. Answer:",
      {"entailment", "neutral", "contradiction"}, 20, 2e-4, 4));
  tasks.push_back(make_task(
      "qqp", "Question 1: {question1}\nQuestion 2: {question2}\nOptions: {options}. Answer:",
      {"yes", "no"}, 50, 1e-4, 3));
  tasks.push_back(make_task(
      "mrpc", "Sentence 1: {sentence1}\nSentence 2: {sentence2}\nOptions: {options}. Answer:",
      {"yes", "no"}, 40, 1e-4, 4));
  tasks.push_back(make_task(
      "rte", "Premise: {sentence1}\nHypothesis: {sentence2}\nOptions: {options}. Answer:",
      {"entailment", "not entailment"}, 50, 1e-4, 5));
  tasks.push_back(make_task(
      "wnli", "Sentence 1: {sentence1}\nSentence 2: {sentence2}\nOptions: {options}. Answer:",
      {"entailment", "not entailment"}, 50, 1e-4, 5));
  tasks.push_back(make_task("mmlu", "Question: {question}, Options: {options}. Answer:",
                            {"A", "B", "C", "D"}, 50, 2e-5, 5));
  return tasks;
}

}  // namespace

const std::vector<TaskSpec>& builtin_tasks() {
  static const std::vector<TaskSpec> tasks = build_all();
  return tasks;
}

const TaskSpec& builtin_task(const std::string& id) {
  for (const auto& task : builtin_tasks())
    if (task.id == id) return task;
  throw std::invalid_argument("unknown task id: " + id + " (expected one of sst2, cola, mnli, "
                              "qqp, mrpc, rte, wnli, mmlu, or a custom template)");
}

bool has_builtin_task(const std::string& id) {
  for (const auto& task : builtin_tasks())
    if (task.id == id) return true;
  return false;
}

}  // namespace ppd
