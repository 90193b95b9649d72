#ifndef RIESZLAB_REPORT_HPP
#define RIESZLAB_REPORT_HPP

#include <json.hpp>
#include <string>

#include "rieszlab/diagnostics.hpp"
#include "rieszlab/oracle.hpp"
#include "rieszlab/simulate.hpp"

namespace rieszlab {

// Stable-key-order JSON views. Two identical reports serialize to
// identical bytes.
nlohmann::ordered_json to_json(const ReplicationReport& report);
nlohmann::ordered_json to_json(const OracleResult& result);
nlohmann::ordered_json to_json(const Estimate& estimate);
nlohmann::ordered_json to_json(const VarianceEstimate& estimate);
nlohmann::ordered_json to_json(const ConfidenceInterval& ci);
nlohmann::ordered_json to_json(const PositivityReport& report);
nlohmann::ordered_json to_json(const DiagnosticsReport& report);

// CSV: documented header + one row. Text: "key: value" lines; the
// replication text view carries the sum_Q conservativeness line and the
// runtime.
std::string to_csv(const ReplicationReport& report);
std::string to_text(const ReplicationReport& report);

// format is one of json/csv/text; empty path writes to stdout.
void emit_report(const ReplicationReport& report, const std::string& format,
                 const std::string& path);
void emit_json(const nlohmann::ordered_json& doc, const std::string& path);

}  // namespace rieszlab

#endif
