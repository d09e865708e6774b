#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace a2k {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // counterexample or summary
};

/// A named list of pass/fail checks. Failures are payload, not exceptions.
class VerificationReport {
 public:
  explicit VerificationReport(std::string subject = {}) : subject_(std::move(subject)) {}

  void add(std::string name, bool passed, std::string detail = {});
  void merge(const VerificationReport& other, const std::string& prefix = {});

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  bool passed(const std::string& name) const;

  const std::string& subject() const { return subject_; }
  const std::vector<CheckResult>& checks() const { return checks_; }

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;

 private:
  std::string subject_;
  std::vector<CheckResult> checks_;
};

}  // namespace a2k
