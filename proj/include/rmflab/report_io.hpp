#pragma once

// Persistence of trial records. Each experiment has one fixed CSV schema
// (docs/csv_schemas.md); floats carry 17 significant digits, lines end in LF,
// rows keep the (N, trial) order they were produced in.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rmflab/harness.hpp"

namespace rmflab::harness {

// Auxiliary columns following `value` for the given experiment.
std::vector<std::string> auxiliary_columns(Experiment experiment);

std::vector<std::string> csv_header(Experiment experiment);

// Throws DomainError when a record lacks a schema column or mixes experiments.
void write_records_csv(std::ostream& out, Experiment experiment,
                       const std::vector<TrialRecord>& records);
void write_records_json(std::ostream& out, Experiment experiment,
                        const std::vector<TrialRecord>& records);

// Inverse of write_records_csv; throws DomainError on a header mismatch.
std::vector<TrialRecord> read_records_csv(std::istream& in, Experiment experiment);

// Writes to `path`, or to stdout when path is empty or "-".
void write_records(const std::string& path, OutputFormat format, Experiment experiment,
                   const std::vector<TrialRecord>& records);

std::string format_double(double x);

}  // namespace rmflab::harness
