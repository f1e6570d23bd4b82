#pragma once

#include <string>
#include <vector>

#include "ppd/gateway.hpp"

namespace ppd {

struct TaskSpec {
  std::string id;
  TaskTemplate tmpl;
  LabelSpace labels;
  std::size_t default_prompt_length = 50;
  double default_learning_rate = 1e-4;
  std::size_t default_demos = 5;
};

// Built-in task definitions: sst2, cola, mnli, qqp, mrpc, rte, wnli, mmlu.
const std::vector<TaskSpec>& builtin_tasks();
const TaskSpec& builtin_task(const std::string& id);  // throws on unknown id
bool has_builtin_task(const std::string& id);

}  // namespace ppd
