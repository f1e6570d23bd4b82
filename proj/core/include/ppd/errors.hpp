#pragma once

#include <stdexcept>
#include <string>

namespace ppd {

// Transport-level failure after retries were exhausted (HTTP backend).
class GatewayError : public std::runtime_error {
 public:
  explicit GatewayError(const std::string& what) : std::runtime_error(what) {}
};

// The configured backend-call budget would be exceeded by the next call.
// Thrown before the call is issued, so the cap is never crossed.
class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Dataset/store/checkpoint file problems (with line context where available).
class LoadError : public std::runtime_error {
 public:
  explicit LoadError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ppd
