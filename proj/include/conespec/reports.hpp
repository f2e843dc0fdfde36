#pragma once

#include <json.hpp>
#include <string>

#include "conespec/lemma_verify.hpp"
#include "conespec/pencil.hpp"

namespace conespec::report {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// FNV-1a 64-bit over the canonical dump; reports embed it as hex.
std::string content_hash(const json& body);

/// Adds version and content_hash fields (hash computed over everything else).
json finalize(json body);

// builders; `config` echoes the fully resolved run configuration into the
// report so outputs are self-describing
json spectral_report(int n, double theta0, double nu, double eigenvalue, double m_exponent,
                     double theta_omega, const pencil::StripReport& strip, std::uint64_t seed,
                     int mesh, int levels, const json& config = json::object());
json scan_report(const pencil::ScanReport& scan, const json& config = json::object());
json kernel_report(const std::vector<harness::LemmaVerdict>& verdicts,
                   const harness::MaximalReport& maximal, double p, double alpha,
                   std::uint64_t seed, int mesh, int levels, bool zone_checks_pass,
                   bool band_checks_pass, bool homogeneity_pass,
                   const json& config = json::object());
json phi_table_report(int n, double nu, double m_exponent, const std::vector<double>& t,
                      const std::vector<double>& phi, const std::vector<double>& rhs,
                      const json& config = json::object());

// Structural validation mirroring report.schema.json: required fields with the
// right types per command; throws std::runtime_error on the first violation.
void validate_report(const json& rep);

/// Lossy CSV flattening of a report (key,value rows; arrays of rows for tables).
std::string to_csv(const json& rep);

}  // namespace conespec::report
