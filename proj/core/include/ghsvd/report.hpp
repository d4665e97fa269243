#pragma once

#include <string>

#include "ghsvd/pipeline.hpp"

namespace ghsvd {

std::string to_string(RunStatus s);
std::string to_string(Variant v);
std::string to_string(StrategyClass s);

/// Machine-readable report.  Timing fields are left out when
/// `with_timings` is false, which makes reports of identical runs equal.
std::string report_json(const RunReport& r, bool with_timings = true);

/// Aligned two-column summary for people.
std::string report_text(const RunReport& r);

}  // namespace ghsvd
