#include "imcf/errors.hpp"

#include <sstream>
#include <utility>

namespace imcf {

namespace {

std::string site_text(const FailureSite& site) {
  std::ostringstream os;
  os << "grid index " << site.index;
  if (site.stage > 0) os << " (stage " << site.stage << ")";
  return os.str();
}

std::string join(const std::vector<std::string>& items) {
  std::string out = "invalid configuration:";
  for (const auto& s : items) out += "\n  - " + s;
  return out;
}

}  // namespace

NonPositiveHeight::NonPositiveHeight(FailureSite site_, double value_)
    : Error("non-positive height " + std::to_string(value_) + " at " + site_text(site_)),
      site(site_),
      value(value_) {}

LostMeanConvexity::LostMeanConvexity(FailureSite site_, double denominator_)
    : Error("lost mean convexity (n + y*trace term = " + std::to_string(denominator_) + ") at " +
            site_text(site_)),
      site(site_),
      denominator(denominator_) {}

OdeBlowup::OdeBlowup(double t_, double value_)
    : Error("comparison ODE left its bound at t=" + std::to_string(t_) +
            " (phi=" + std::to_string(value_) + ")"),
      t(t_),
      value(value_) {}

InadmissibleInitialData::InadmissibleInitialData(std::string condition_, std::size_t index_)
    : Error("inadmissible initial data: " + condition_ + " at grid index " +
            std::to_string(index_)),
      condition(std::move(condition_)),
      index(index_) {}

ParseError::ParseError(int line_, const std::string& what)
    : Error("line " + std::to_string(line_) + ": " + what), line(line_) {}

ValidationError::ValidationError(std::vector<std::string> violations_)
    : Error(join(violations_)), violations(std::move(violations_)) {}

}  // namespace imcf
