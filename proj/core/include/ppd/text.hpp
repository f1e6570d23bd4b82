#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ppd {

// Canonical corpus tokenization: lowercase, punctuation treated as whitespace,
// split on whitespace. All n-gram counting, segmentation, prompt overlap and
// bag-of-words embedding go through this so counts stay reproducible.
std::vector<std::string> tokenize(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string lowercase(std::string_view s);

}  // namespace ppd
