#pragma once

#include <string_view>

namespace foliage {

enum class Verdict { Pass, Fail, Flagged, Inconclusive, NotApplicable };

constexpr std::string_view toString(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Flagged: return "flagged";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::NotApplicable: return "not applicable";
  }
  return "unknown";
}

}  // namespace foliage
