#pragma once

#include <string>

#include "json.hpp"
#include "kza/associator.hpp"
#include "kza/series.hpp"

namespace kza {

// {"order": N, "alphabet": [...], "terms": [{"lambda": r, "word": [...],
//  "re": x, "im": y}, ...]} with terms sorted by (lambda, word order)
nlohmann::json series_to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const nlohmann::json& j);

nlohmann::json verify_report_to_json(const VerifyReport& r);
nlohmann::json lbh_to_json(const LbhDiagnostics& d);

}  // namespace kza
