#include "maxineq/check_report.hpp"

#include <algorithm>

#include "json.hpp"

namespace maxineq {

CheckReport CheckReport::make(std::string name, const Params& prm, long grid_size,
                              double worst_slack, std::string location,
                              double tolerance, SlackKind kind) {
    CheckReport r;
    r.check_name = std::move(name);
    r.params = prm;
    r.grid_size = grid_size;
    r.worst_slack = worst_slack;
    r.worst_location = std::move(location);
    r.tolerance = tolerance;
    r.kind = kind;
    r.pass = (kind == SlackKind::GE) ? (worst_slack >= -tolerance)
                                     : (worst_slack <= tolerance);
    return r;
}

std::string report_to_json_line(const CheckReport& r) {
    nlohmann::json j;
    j["check"] = r.check_name;
    j["p"] = r.params.p;
    j["alpha"] = r.params.alpha;
    j["grid_size"] = r.grid_size;
    j["worst_slack"] = r.worst_slack;
    j["worst_location"] = r.worst_location;
    j["tolerance"] = r.tolerance;
    j["kind"] = (r.kind == SlackKind::GE) ? "ge" : "le";
    j["verdict"] = r.pass ? "pass" : "fail";
    return j.dump();
}

bool all_pass(const std::vector<CheckReport>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const CheckReport& r) { return r.pass; });
}

}  // namespace maxineq
