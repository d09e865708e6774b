#include "a2k/verification.hpp"

#include <algorithm>
#include <sstream>

namespace a2k {

void VerificationReport::add(std::string name, bool passed, std::string detail) {
  checks_.push_back({std::move(name), passed, std::move(detail)});
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (const auto& c : other.checks_) checks_.push_back({prefix + c.name, c.passed, c.detail});
}

bool VerificationReport::passed() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  auto it = std::find_if(checks_.begin(), checks_.end(),
                         [&](const CheckResult& c) { return c.name == name; });
  return it == checks_.end() ? nullptr : &*it;
}

bool VerificationReport::passed(const std::string& name) const {
  const auto* c = find(name);
  return c != nullptr && c->passed;
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json out;
  out["subject"] = subject_;
  out["passed"] = passed();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks_) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["passed"] = c.passed;
    if (!c.detail.empty()) j["detail"] = c.detail;
    arr.push_back(std::move(j));
  }
  out["checks"] = std::move(arr);
  return out;
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  os << subject_ << ": " << (passed() ? "PASS" : "FAIL") << '\n';
  for (const auto& c : checks_) {
    os << "  " << (c.passed ? "pass " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << "  (" << c.detail << ')';
    os << '\n';
  }
  return os.str();
}

}  // namespace a2k
