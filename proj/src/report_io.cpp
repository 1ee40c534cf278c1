#include "rmflab/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "rmflab/errors.hpp"

namespace rmflab::harness {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::uint64_t parse_u64(const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DomainError("read_records_csv: bad integer field '" + text + "'");
  }
  return v;
}

double parse_double(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw DomainError("");
    return v;
  } catch (const std::exception&) {
    throw DomainError("read_records_csv: bad real field '" + text + "'");
  }
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

void check_experiment(Experiment experiment, const std::vector<TrialRecord>& records) {
  for (const auto& r : records) {
    if (r.experiment != experiment) {
      throw DomainError("write_records: record from experiment " +
                        std::string(to_string(r.experiment)) + " in a " +
                        std::string(to_string(experiment)) + " file");
    }
  }
}

}  // namespace

std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

std::vector<std::string> auxiliary_columns(Experiment experiment) {
  switch (experiment) {
    case Experiment::LowerBound: return {"theta_star"};
    case Experiment::UpperBound:
    case Experiment::VarianceMax: return {"theta_star", "epsilon", "points", "total_points"};
    case Experiment::Clt: return {"theta"};
    case Experiment::GaussMax: return {"epsilon", "delta"};
    case Experiment::Verify: return {};
  }
  return {};
}

std::vector<std::string> csv_header(Experiment experiment) {
  std::vector<std::string> header = {"experiment", "kind", "N", "trial", "seed", "statistic", "value"};
  for (auto& c : auxiliary_columns(experiment)) header.push_back(std::move(c));
  return header;
}

void write_records_csv(std::ostream& out, Experiment experiment,
                       const std::vector<TrialRecord>& records) {
  check_experiment(experiment, records);
  const auto aux = auxiliary_columns(experiment);
  out << join(csv_header(experiment)) << '\n';
  for (const auto& r : records) {
    out << to_string(r.experiment) << ',' << rmf::to_string(r.kind) << ',' << r.n << ','
        << r.trial << ',' << r.seed << ',' << r.statistic << ',' << format_double(r.value);
    for (const auto& column : aux) {
      // a column absent from a row (e.g. ks_distance has no theta) is left empty
      const auto v = r.aux(column);
      out << ',';
      if (v) out << format_double(*v);
    }
    out << '\n';
  }
}

void write_records_json(std::ostream& out, Experiment experiment,
                        const std::vector<TrialRecord>& records) {
  check_experiment(experiment, records);
  nlohmann::ordered_json doc;
  doc["experiment"] = to_string(experiment);
  doc["columns"] = csv_header(experiment);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json row;
    row["experiment"] = to_string(r.experiment);
    row["kind"] = rmf::to_string(r.kind);
    row["N"] = r.n;
    row["trial"] = r.trial;
    row["seed"] = r.seed;
    row["statistic"] = r.statistic;
    row["value"] = r.value;
    for (const auto& [key, v] : r.auxiliary) row[key] = v;
    rows.push_back(std::move(row));
  }
  doc["records"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

std::vector<TrialRecord> read_records_csv(std::istream& in, Experiment experiment) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("read_records_csv: empty input");
  const auto expected = csv_header(experiment);
  if (split_line(line) != expected) {
    throw DomainError("read_records_csv: header '" + line + "' does not match '" + join(expected) + "'");
  }
  const auto aux = auxiliary_columns(experiment);
  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != expected.size()) {
      throw DomainError("read_records_csv: wrong field count in '" + line + "'");
    }
    TrialRecord r;
    r.experiment = parse_experiment(fields[0]);
    if (r.experiment != experiment) throw DomainError("read_records_csv: experiment mismatch");
    r.kind = rmf::parse_kind(fields[1]);
    r.n = parse_u64(fields[2]);
    r.trial = parse_u64(fields[3]);
    r.seed = parse_u64(fields[4]);
    r.statistic = fields[5];
    r.value = parse_double(fields[6]);
    for (std::size_t i = 0; i < aux.size(); ++i) {
      if (!fields[7 + i].empty()) r.auxiliary.emplace_back(aux[i], parse_double(fields[7 + i]));
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_records(const std::string& path, OutputFormat format, Experiment experiment,
                   const std::vector<TrialRecord>& records) {
  auto emit = [&](std::ostream& out) {
    if (format == OutputFormat::Csv) {
      write_records_csv(out, experiment, records);
    } else {
      write_records_json(out, experiment, records);
    }
  };
  if (path.empty() || path == "-") {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot open output file " + path);
  emit(out);
  if (!out) throw ResourceError("write failed for " + path);
}

}  // namespace rmflab::harness
