#pragma once

#include <string>
#include <vector>

#include "maxineq/gamma.hpp"

namespace maxineq {

// Slack direction of a check: GE means the quantity must stay >= -tolerance,
// LE means it must stay <= tolerance.
enum class SlackKind { GE, LE };

struct CheckReport {
    std::string check_name;
    Params params;
    long grid_size = 0;
    double worst_slack = 0.0;
    std::string worst_location;
    double tolerance = 0.0;
    SlackKind kind = SlackKind::GE;
    bool pass = false;

    static CheckReport make(std::string name, const Params& prm, long grid_size,
                            double worst_slack, std::string location,
                            double tolerance, SlackKind kind);
};

std::string report_to_json_line(const CheckReport& r);

// true iff every report passed
bool all_pass(const std::vector<CheckReport>& reports);

}  // namespace maxineq
