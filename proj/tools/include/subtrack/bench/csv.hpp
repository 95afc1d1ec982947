#pragma once

#include "subtrack/optimizer.hpp"

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace subtrack::bench {

/// Shortest round-trip-safe formatting is overkill for plots; 12 significant
/// digits keeps files small and still byte-stable. Values below 1e-4 in
/// magnitude come out in scientific notation.
std::string format_number(double x);

/// Fixed-schema CSV writer. Every row must have exactly as many fields as
/// the header; a mismatch throws.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  class Row {
   public:
    Row& operator<<(double x);
    Row& operator<<(long long x);
    Row& operator<<(unsigned long long x);
    Row& operator<<(int x) { return *this << static_cast<long long>(x); }
    Row& operator<<(std::size_t x) { return *this << static_cast<unsigned long long>(x); }
    Row& operator<<(bool x) { return *this << static_cast<long long>(x ? 1 : 0); }
    Row& operator<<(std::string_view s);
    Row& operator<<(const char* s) { return *this << std::string_view(s); }
    ~Row() noexcept(false);

   private:
    friend class CsvWriter;
    explicit Row(CsvWriter& w) : w_(w) {}
    void sep();
    CsvWriter& w_;
    std::string line_;
    std::size_t fields_ = 0;
  };

  Row row() { return Row(*this); }
  std::size_t columns() const { return header_.size(); }

 private:
  std::ostream& out_;
  std::vector<std::string> header_;
};

/// Binds the engine's per-step records to a CSV stream:
/// param,step,subspace_updated,sigma,lowrank_update_norm,lambda_norm,update_norm
class CsvStepSink : public StepLogSink {
 public:
  explicit CsvStepSink(std::ostream& out);
  void record(const StepRecord& rec) override;

 private:
  CsvWriter csv_;
};

}  // namespace subtrack::bench
