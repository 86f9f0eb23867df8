#include "traffic/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "traffic/csv.hpp"

namespace traffic {

namespace {

constexpr std::size_t kCountsFields = 29;   // 5 key fields + 24 hours
constexpr std::size_t kStationFields = 6;

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view sv) const {
    return std::hash<std::string_view>{}(sv);
  }
};

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

// Fast comma split for lines without quotes; falls back to the quoted parser.
bool split_fields(std::string_view line, std::vector<std::string_view>& views,
                  std::vector<std::string>& storage) {
  views.clear();
  if (line.find('"') == std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string_view::npos) {
        views.push_back(line.substr(start));
        return true;
      }
      views.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
  }
  if (!csv::split_line(line, storage)) return false;
  for (const auto& s : storage) views.push_back(s);
  return true;
}

void add_issue(IngestReport& report, int line_no, std::string reason) {
  if (report.samples.size() < IngestReport::kMaxSamples) {
    report.samples.push_back({line_no, std::move(reason)});
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error reading file: " + path.string());
  return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("error writing file: " + path.string());
}

bool parse_count_cell(std::string_view field, HourlyCount& out) {
  if (field.empty()) {
    out = std::nullopt;
    return true;
  }
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) return false;
  out = value;
  return true;
}

// Dense per-station slot index for duplicate detection:
// (day of year, direction, class) -> [0, 366*9).
int record_slot(const Date& date, Direction dir, VehicleClass cls) {
  auto jan1 = std::chrono::sys_days{make_date(year_of(date), 1, 1)};
  int doy = static_cast<int>((std::chrono::sys_days{date} - jan1).count());
  return doy * 9 + static_cast<int>(dir) * 3 + static_cast<int>(cls);
}

}  // namespace

ParsedCounts parse_counts(std::string_view content, int year) {
  ParsedCounts result;
  result.dataset.year = year;

  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= content.size()) return false;
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) {
      line = content.substr(pos);
      pos = content.size();
    } else {
      line = content.substr(pos, nl - pos);
      pos = nl + 1;
    }
    line = strip_cr(line);
    return true;
  };

  std::string_view header;
  if (!next_line(header) || header != kCountsHeader) {
    throw std::runtime_error("counts file: missing or unrecognized header");
  }

  std::vector<std::string_view> fields;
  std::vector<std::string> storage;
  std::unordered_map<std::string, std::vector<bool>, StringHash, std::equal_to<>> seen;
  const int slots = 366 * 9;

  std::string_view line;
  int line_no = 1;
  while (next_line(line)) {
    ++line_no;
    if (line.empty() && pos >= content.size()) break;  // trailing newline
    ++result.report.rows_read;

    if (!split_fields(line, fields, storage)) {
      ++result.report.malformed;
      add_issue(result.report, line_no, "unbalanced quotes");
      continue;
    }
    if (fields.size() != kCountsFields) {
      ++result.report.malformed;
      add_issue(result.report, line_no,
                "expected " + std::to_string(kCountsFields) + " fields, got " +
                    std::to_string(fields.size()));
      continue;
    }

    TrafficRecord record;
    record.station_id = std::string{fields[0]};
    record.route_id = std::string{fields[1]};
    if (record.station_id.empty() || record.route_id.empty()) {
      ++result.report.malformed;
      add_issue(result.report, line_no, "empty station_id or route_id");
      continue;
    }
    auto dir = parse_direction(fields[2]);
    auto cls = parse_vehicle_class(fields[3]);
    auto date = parse_date(fields[4]);
    if (!dir || !cls || !date) {
      ++result.report.malformed;
      add_issue(result.report, line_no,
                !dir   ? "bad direction '" + std::string{fields[2]} + "'"
                : !cls ? "bad vehicle_class '" + std::string{fields[3]} + "'"
                       : "bad date '" + std::string{fields[4]} + "'");
      continue;
    }
    if (year_of(*date) != year) {
      ++result.report.malformed;
      add_issue(result.report, line_no,
                "date " + format_date(*date) + " outside year " + std::to_string(year));
      continue;
    }
    record.direction = *dir;
    record.vehicle_class = *cls;
    record.date = *date;

    bool bad_cell = false;
    for (std::size_t h = 0; h < 24; ++h) {
      if (!parse_count_cell(fields[5 + h], record.counts[h])) {
        ++result.report.malformed;
        add_issue(result.report, line_no,
                  "bad count '" + std::string{fields[5 + h]} + "' at hour " + std::to_string(h));
        bad_cell = true;
        break;
      }
    }
    if (bad_cell) continue;

    auto it = seen.find(std::string_view{record.station_id});
    if (it == seen.end()) {
      it = seen.emplace(record.station_id, std::vector<bool>(slots, false)).first;
    }
    int slot = record_slot(record.date, record.direction, record.vehicle_class);
    if (it->second[static_cast<std::size_t>(slot)]) {
      ++result.report.duplicates;
      add_issue(result.report, line_no,
                "duplicate key (" + record.station_id + "," + format_date(record.date) + "," +
                    std::string{to_string(record.direction)} + "," +
                    std::string{to_string(record.vehicle_class)} + ")");
      continue;
    }
    it->second[static_cast<std::size_t>(slot)] = true;

    ++result.report.rows_accepted;
    result.dataset.records.push_back(std::move(record));
  }
  return result;
}

ParsedCounts parse_counts_file(const std::filesystem::path& path, int year) {
  return parse_counts(read_file(path), year);
}

StationFileResult parse_stations(std::string_view content) {
  StationFileResult result;

  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= content.size()) return false;
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) {
      line = content.substr(pos);
      pos = content.size();
    } else {
      line = content.substr(pos, nl - pos);
      pos = nl + 1;
    }
    line = strip_cr(line);
    return true;
  };

  std::string_view header;
  if (!next_line(header) || header != kStationsHeader) {
    throw std::runtime_error("stations file: missing or unrecognized header");
  }

  auto parse_coord = [](std::string_view field, double lo, double hi,
                        std::optional<double>& out) -> std::string {
    if (field.empty()) {
      out = std::nullopt;
      return {};
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
      return "bad coordinate '" + std::string{field} + "'";
    }
    if (value < lo || value > hi) {
      return "coordinate " + std::string{field} + " out of range [" +
             csv::format_double(lo) + ", " + csv::format_double(hi) + "]";
    }
    out = value;
    return {};
  };

  std::vector<std::string_view> fields;
  std::vector<std::string> storage;
  std::string_view line;
  int line_no = 1;
  while (next_line(line)) {
    ++line_no;
    if (line.empty() && pos >= content.size()) break;

    if (!split_fields(line, fields, storage)) {
      result.rejected.push_back({line_no, "unbalanced quotes"});
      continue;
    }
    if (fields.size() != kStationFields) {
      result.rejected.push_back({line_no, "expected " + std::to_string(kStationFields) +
                                              " fields, got " + std::to_string(fields.size())});
      continue;
    }

    StationMeta meta;
    meta.station_id = std::string{fields[0]};
    meta.name = std::string{fields[1]};
    meta.route_id = std::string{fields[2]};
    if (meta.station_id.empty()) {
      result.rejected.push_back({line_no, "empty station_id"});
      continue;
    }
    if (auto err = parse_coord(fields[3], -90.0, 90.0, meta.latitude); !err.empty()) {
      result.rejected.push_back({line_no, "latitude: " + err});
      continue;
    }
    if (auto err = parse_coord(fields[4], -180.0, 180.0, meta.longitude); !err.empty()) {
      result.rejected.push_back({line_no, "longitude: " + err});
      continue;
    }
    if (meta.latitude.has_value() != meta.longitude.has_value()) {
      result.rejected.push_back({line_no, "partial coordinates"});
      continue;
    }
    if (!fields[5].empty()) {
      auto border = parse_border_country(fields[5]);
      if (!border) {
        result.rejected.push_back({line_no, "bad border_country '" + std::string{fields[5]} + "'"});
        continue;
      }
      meta.border_country = border;
    }

    if (!result.registry.insert(std::move(meta))) {
      throw std::runtime_error("stations file: duplicate station_id '" + std::string{fields[0]} +
                               "' at line " + std::to_string(line_no));
    }
  }
  return result;
}

StationFileResult parse_stations_file(const std::filesystem::path& path) {
  return parse_stations(read_file(path));
}

DatasetSummary dataset_summary(const Dataset& dataset) {
  DatasetSummary summary;
  summary.n_records = dataset.records.size();
  std::unordered_set<std::string_view> stations;
  std::unordered_set<std::string_view> routes;
  for (const auto& record : dataset.records) {
    stations.insert(record.station_id);
    routes.insert(record.route_id);
    auto& total = summary.total_by_class[static_cast<std::size_t>(record.vehicle_class)];
    for (const auto& cell : record.counts) {
      if (cell.has_value()) total += *cell;
    }
  }
  summary.n_stations = stations.size();
  summary.n_routes = routes.size();
  return summary;
}

std::string counts_to_csv(const Dataset& dataset) {
  std::vector<std::size_t> order(dataset.records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return record_key_less(dataset.records[a], dataset.records[b]);
  });

  std::string out;
  out.reserve(dataset.records.size() * 96 + 256);
  out += kCountsHeader;
  out += '\n';
  char buf[16];
  for (std::size_t idx : order) {
    const auto& r = dataset.records[idx];
    out += csv::escape(r.station_id);
    out += ',';
    out += csv::escape(r.route_id);
    out += ',';
    out += to_string(r.direction);
    out += ',';
    out += to_string(r.vehicle_class);
    out += ',';
    out += format_date(r.date);
    for (const auto& cell : r.counts) {
      out += ',';
      if (cell.has_value()) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *cell);
        out.append(buf, ptr);
      }
    }
    out += '\n';
  }
  return out;
}

std::string stations_to_csv(const StationRegistry& registry) {
  std::string out;
  out += kStationsHeader;
  out += '\n';
  for (const auto& meta : registry.items()) {
    out += csv::escape(meta.station_id);
    out += ',';
    out += csv::escape(meta.name);
    out += ',';
    out += csv::escape(meta.route_id);
    out += ',';
    if (meta.latitude) csv::append_double(out, *meta.latitude);
    out += ',';
    if (meta.longitude) csv::append_double(out, *meta.longitude);
    out += ',';
    if (meta.border_country) out += to_string(*meta.border_country);
    out += '\n';
  }
  return out;
}

void write_counts_csv(const Dataset& dataset, const std::filesystem::path& path) {
  write_file(path, counts_to_csv(dataset));
}

void write_stations_csv(const StationRegistry& registry, const std::filesystem::path& path) {
  write_file(path, stations_to_csv(registry));
}

std::string report_to_text(const IngestReport& report) {
  std::string out;
  out += "rows_read: " + std::to_string(report.rows_read) + "\n";
  out += "rows_accepted: " + std::to_string(report.rows_accepted) + "\n";
  out += "duplicates: " + std::to_string(report.duplicates) + "\n";
  out += "malformed: " + std::to_string(report.malformed) + "\n";
  if (!report.samples.empty()) {
    out += "issues (first " + std::to_string(report.samples.size()) + "):\n";
    for (const auto& issue : report.samples) {
      out += "  line " + std::to_string(issue.line_no) + ": " + issue.reason + "\n";
    }
  }
  return out;
}

std::string summary_to_csv(const DatasetSummary& summary) {
  std::string out = "metric,value\n";
  out += "n_records," + std::to_string(summary.n_records) + "\n";
  out += "n_stations," + std::to_string(summary.n_stations) + "\n";
  out += "n_routes," + std::to_string(summary.n_routes) + "\n";
  out += "total_car," +
         std::to_string(summary.total_by_class[static_cast<std::size_t>(VehicleClass::Car)]) + "\n";
  out += "total_truck," +
         std::to_string(summary.total_by_class[static_cast<std::size_t>(VehicleClass::Truck)]) +
         "\n";
  out += "total_all," +
         std::to_string(summary.total_by_class[static_cast<std::size_t>(VehicleClass::All)]) + "\n";
  return out;
}

}  // namespace traffic
