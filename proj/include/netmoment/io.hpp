#pragma once

#include <string>
#include <vector>

#include "netmoment/bep.hpp"
#include "netmoment/experiments.hpp"
#include "netmoment/operators.hpp"

namespace netmoment::io {

// Shortest decimal that round-trips to the same double (JSON payloads).
std::string format_roundtrip(double v);
// Fixed 17-significant-digit formatting (CSV payloads).
std::string format_17(double v);

std::string magnetization_to_json(const operators::Magnetization& m);
operators::Magnetization magnetization_from_json(const std::string& text);

std::string field_samples_to_json(const operators::FieldSamples& f);
operators::FieldSamples field_samples_from_json(const std::string& text);

std::string solution_to_json(const bep::BepSolution& sol);
bep::BepSolution solution_from_json(const std::string& text);

// Single-target sweep table, header `lambda,M,residual`.
std::string sweep_to_csv(const std::vector<bep::SweepRow>& rows);

// Moment reports, header `space,lambda,m1e,m2e,eps1,eps2`.
std::string reports_to_csv(const std::vector<experiments::MomentReport>& reports);

std::string space_name(bep::Space space);
bep::Space space_by_name(const std::string& name);
std::string zero_mode_name(bep::ZeroMode mode);
bep::ZeroMode zero_mode_by_name(const std::string& name);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace netmoment::io
