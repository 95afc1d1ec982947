#include "subtrack/bench/csv.hpp"

#include <fmt/format.h>

#include <exception>
#include <stdexcept>
#include <utility>

namespace subtrack::bench {

std::string format_number(double x) {
  if (x == 0.0) return "0";  // also folds -0
  return fmt::format("{:.12g}", x);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header)
    : out_(out), header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("csv: empty header");
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out_ << ',';
    out_ << header_[i];
  }
  out_ << '\n';
}

void CsvWriter::Row::sep() {
  if (fields_++) line_ += ',';
}

CsvWriter::Row& CsvWriter::Row::operator<<(double x) {
  sep();
  line_ += format_number(x);
  return *this;
}

CsvWriter::Row& CsvWriter::Row::operator<<(long long x) {
  sep();
  line_ += std::to_string(x);
  return *this;
}

CsvWriter::Row& CsvWriter::Row::operator<<(unsigned long long x) {
  sep();
  line_ += std::to_string(x);
  return *this;
}

CsvWriter::Row& CsvWriter::Row::operator<<(std::string_view s) {
  if (s.find_first_of(",\"\n") != std::string_view::npos) {
    throw std::invalid_argument("csv: field needs quoting: " + std::string(s));
  }
  sep();
  line_ += s;
  return *this;
}

CsvWriter::Row::~Row() noexcept(false) {
  if (fields_ != w_.header_.size()) {
    // Don't throw while another exception is already unwinding.
    if (std::uncaught_exceptions() > 0) return;
    throw std::logic_error("csv: row has " + std::to_string(fields_) + " fields, header has " +
                           std::to_string(w_.header_.size()));
  }
  w_.out_ << line_ << '\n';
}

CsvStepSink::CsvStepSink(std::ostream& out)
    : csv_(out, {"param", "step", "subspace_updated", "sigma", "lowrank_update_norm",
                 "lambda_norm", "update_norm"}) {}

void CsvStepSink::record(const StepRecord& rec) {
  csv_.row() << rec.param << rec.step << rec.subspace_updated << rec.sigma
             << rec.lowrank_update_norm << rec.lambda_norm << rec.update_norm;
}

}  // namespace subtrack::bench
