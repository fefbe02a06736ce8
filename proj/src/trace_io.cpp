#include "snapcheck/trace_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <type_traits>

namespace snapcheck {

using nlohmann::json;

json config_to_json(const SimConfig& c) {
  return json{
      {"nodes", c.nodes},
      {"instances_per_node", c.instances_per_node},
      {"event_lifespan_ms", {c.event_lifespan_ms.lo, c.event_lifespan_ms.hi}},
      {"message_delay_ms", {c.message_delay_ms.lo, c.message_delay_ms.hi}},
      {"error_rate", c.error_rate},
      {"stay_mean_ms", c.stay_mean_ms},
      {"events_per_process", c.events_per_process},
      {"users", c.users},
      {"rooms", c.rooms},
      {"seed", c.seed},
  };
}

namespace {

template <class T>
T read_field(const json& j, const char* field) {
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        throw ConfigError(field, "expected a non-negative integer");
      }
    }
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field, "wrong type");
  }
}

MsRange read_range(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(field, "expected [lo, hi] in milliseconds");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

SimConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected an object");
  SimConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "nodes") c.nodes = read_field<std::uint32_t>(value, "nodes");
    else if (key == "instances_per_node") c.instances_per_node = read_field<std::uint32_t>(value, "instances_per_node");
    else if (key == "event_lifespan_ms") c.event_lifespan_ms = read_range(value, "event_lifespan_ms");
    else if (key == "message_delay_ms") c.message_delay_ms = read_range(value, "message_delay_ms");
    else if (key == "error_rate") c.error_rate = read_field<double>(value, "error_rate");
    else if (key == "stay_mean_ms") c.stay_mean_ms = read_field<double>(value, "stay_mean_ms");
    else if (key == "events_per_process") c.events_per_process = read_field<std::uint32_t>(value, "events_per_process");
    else if (key == "users") c.users = read_field<std::uint32_t>(value, "users");
    else if (key == "rooms") c.rooms = read_field<std::uint32_t>(value, "rooms");
    else if (key == "seed") c.seed = read_field<std::uint64_t>(value, "seed");
    else throw ConfigError(key, "unknown field");
  }
  c.validate();
  return c;
}

void write_trace(std::ostream& os, const Trace& trace) {
  json header{{"kind", "header"},
              {"format", kTraceFormat},
              {"processes", trace.process_count},
              {"generation_drops", trace.generation_drops},
              {"config", config_to_json(trace.config)}};
  os << header.dump() << '\n';
  for (const auto& e : trace.events) {
    json line{{"kind", "event"},
              {"process", e.id.process},
              {"seq", e.id.seq},
              {"start_us", e.start},
              {"end_us", e.end}};
    if (e.reading) {
      line["reading"] = {{"user", e.reading->user},
                         {"location", e.reading->location},
                         {"true_location", e.reading->true_location},
                         {"erroneous", e.reading->erroneous}};
    }
    os << line.dump() << '\n';
  }
  for (const auto& m : trace.messages) {
    json line{{"kind", "message"},
              {"from", {m.from.process, m.from.seq}},
              {"to", {m.to.process, m.to.seq}},
              {"send_us", m.send},
              {"deliver_us", m.deliver}};
    os << line.dump() << '\n';
  }
}

namespace {

EventId read_event_id(const json& j, std::size_t line) {
  if (!j.is_array() || j.size() != 2) throw TraceFormatError(line, "event id must be [process, seq]");
  return {j[0].get<ProcessId>(), j[1].get<std::uint32_t>()};
}

}  // namespace

Trace read_trace(std::istream& is) {
  Trace trace;
  bool have_header = false;
  std::string text;
  std::size_t line = 0;
  while (std::getline(is, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw TraceFormatError(line, std::string("invalid JSON: ") + e.what());
    }
    try {
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "header") {
        if (have_header) throw TraceFormatError(line, "second header");
        if (j.at("format").get<std::string>() != kTraceFormat) {
          throw TraceFormatError(line, "unsupported format " + j.at("format").dump());
        }
        trace.process_count = j.at("processes").get<std::size_t>();
        trace.generation_drops = j.value("generation_drops", std::uint64_t{0});
        if (j.contains("config")) trace.config = config_from_json(j.at("config"));
        have_header = true;
      } else if (!have_header) {
        throw TraceFormatError(line, "record before header");
      } else if (kind == "event") {
        TraceEvent e;
        e.id = {j.at("process").get<ProcessId>(), j.at("seq").get<std::uint32_t>()};
        e.start = j.at("start_us").get<Micros>();
        e.end = j.at("end_us").get<Micros>();
        if (j.contains("reading")) {
          const auto& r = j.at("reading");
          e.reading = ContextReading{r.at("user").get<UserId>(), r.at("location").get<RoomId>(),
                                     r.at("true_location").get<RoomId>(), r.at("erroneous").get<bool>()};
        }
        trace.events.push_back(e);
      } else if (kind == "message") {
        trace.messages.push_back({read_event_id(j.at("from"), line), read_event_id(j.at("to"), line),
                                  j.at("send_us").get<Micros>(), j.at("deliver_us").get<Micros>()});
      } else {
        throw TraceFormatError(line, "unknown record kind " + kind);
      }
    } catch (const json::exception& e) {
      throw TraceFormatError(line, e.what());
    } catch (const ConfigError& e) {
      throw TraceFormatError(line, e.what());
    }
  }
  if (!have_header) throw TraceFormatError(line, "missing header");
  std::sort(trace.events.begin(), trace.events.end(),
            [](const TraceEvent& a, const TraceEvent& b) { return a.id < b.id; });
  trace.reindex();
  trace.validate();
  return trace;
}

void save_trace(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_trace(os, trace);
}

Trace load_trace(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_trace(is);
}

}  // namespace snapcheck
