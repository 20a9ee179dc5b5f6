#ifndef DEVSTONE_REPORT_HPP
#define DEVSTONE_REPORT_HPP

#include <string>

#include "devstone/metric.hpp"

namespace devstone {

/// JSON serialization of a metric report (UTF-8, newline-terminated).
/// parse_report(report_to_json(r)) == r for metric reports (zero-delay
/// configs; the schema does not carry delay parameters).
std::string report_to_json(const MetricReport& report);
MetricReport parse_report(const std::string& json_text);

/// CSV export: header, one row per model, and a trailing summary row.
std::string report_to_csv(const MetricReport& report);

void write_report_file(const MetricReport& report, const std::string& path,
                       const std::string& format);  // "json" or "csv"

}  // namespace devstone

#endif
