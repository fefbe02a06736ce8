#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "snapcheck/simulator.hpp"

namespace snapcheck {

/// Line-delimited trace file: one JSON object per line. The first record is
/// the header, followed by events and messages in any order.
///
///   {"kind":"header","format":"snapcheck-trace/1","processes":2,"config":{...}}
///   {"kind":"event","process":0,"seq":0,"start_us":0,"end_us":30000,
///    "reading":{"user":0,"location":3,"true_location":3,"erroneous":false}}
///   {"kind":"message","from":[0,0],"to":[1,0],"send_us":5000,"deliver_us":9000}
///
/// Blank lines are ignored. A header may carry a free-form "note".
inline constexpr const char* kTraceFormat = "snapcheck-trace/1";

class TraceFormatError : public std::runtime_error {
 public:
  TraceFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

nlohmann::json config_to_json(const SimConfig& config);
/// Fields absent from `j` keep their defaults. Unknown fields and wrong types
/// raise ConfigError naming the field; the result is validated.
SimConfig config_from_json(const nlohmann::json& j);

void write_trace(std::ostream& os, const Trace& trace);
/// Parses and validates; throws TraceFormatError or std::invalid_argument.
Trace read_trace(std::istream& is);

void save_trace(const std::filesystem::path& path, const Trace& trace);
Trace load_trace(const std::filesystem::path& path);

}  // namespace snapcheck
