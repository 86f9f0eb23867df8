// trafficlens: command-line front end for the traffic harmonization library.
//
// Subcommands cover the pipeline end to end: synth (test data), ingest
// (validation + canonical export), quality (completeness calendar + week
// selection), harmonize (representative hourly profiles), trends (monthly
// totals and year-over-year change), hotspot (station rush summaries),
// crossborder (directional matrices and balance), and report (everything
// from a config file, including SVG charts).
//
// Exit codes: 0 success, 1 usage/config error, 2 data error. Reruns on
// unchanged inputs produce byte-identical files; writes go through a
// temp-then-rename step so readers never see partial output.

#include <CLI11.hpp>

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "traffic/charts.hpp"
#include "traffic/crossborder.hpp"
#include "traffic/csv.hpp"
#include "traffic/harmonize.hpp"
#include "traffic/hotspot.hpp"
#include "traffic/ingest.hpp"
#include "traffic/model.hpp"
#include "traffic/quality.hpp"
#include "traffic/synth.hpp"
#include "traffic/trends.hpp"

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Logging: level from TRAFFICLENS_LOG (debug|info|warn|error), default warn.

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3 };

LogLevel g_log_level = LogLevel::Warn;

void init_logging() {
  const char* env = std::getenv("TRAFFICLENS_LOG");
  if (env == nullptr) return;
  const std::string value = env;
  if (value == "debug") {
    g_log_level = LogLevel::Debug;
  } else if (value == "info") {
    g_log_level = LogLevel::Info;
  } else if (value == "warn") {
    g_log_level = LogLevel::Warn;
  } else if (value == "error") {
    g_log_level = LogLevel::Error;
  } else {
    std::cerr << "warn: unknown TRAFFICLENS_LOG level '" << value << "', using warn\n";
  }
}

void log_at(LogLevel level, std::string_view tag, std::string_view msg) {
  if (level < g_log_level) return;
  std::cerr << tag << ": " << msg << '\n';
}

void log_info(std::string_view msg) { log_at(LogLevel::Info, "info", msg); }
void log_warn(std::string_view msg) { log_at(LogLevel::Warn, "warn", msg); }

// ---------------------------------------------------------------------------
// Error taxonomy for exit codes.

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Files.

void atomic_write(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
  log_info("wrote " + path.string());
}

// ---------------------------------------------------------------------------
// Config file: flat `key = value` lines, '#' comments. Recognized keys:
//   counts.<year> = path        stations = path        out = dir
//   class = car|truck|all       policy = strict|lenient
//   window|morning|evening = HH-HH
//   day_type = weekday|saturday|sunday
//   station = ID                month = 1..12          top = K
//   outbound.<station> = 1|2
// Flags override file values.

struct FileConfig {
  std::map<int, std::string> counts;
  std::map<std::string, std::string> values;
  std::map<std::string, int> outbound;
};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

FileConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw UsageError("config file not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file: " + path.string());

  static const std::set<std::string> kPlainKeys = {
      "stations", "out",   "class",   "policy", "window", "morning",
      "evening",  "station", "day_type", "month",  "top"};

  FileConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const std::size_t eq = stripped.find('=');
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw UsageError(where + ": expected key = value");
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty() || value.empty()) throw UsageError(where + ": empty key or value");

    if (key.rfind("counts.", 0) == 0) {
      int year = 0;
      try {
        year = std::stoi(key.substr(7));
      } catch (const std::exception&) {
        throw UsageError(where + ": bad year in key '" + key + "'");
      }
      cfg.counts[year] = value;
    } else if (key.rfind("outbound.", 0) == 0) {
      const std::string station = key.substr(9);
      if (value != "1" && value != "2") {
        throw UsageError(where + ": outbound direction must be 1 or 2");
      }
      cfg.outbound[station] = value == "1" ? 1 : 2;
    } else if (kPlainKeys.count(key) > 0) {
      cfg.values[key] = value;
    } else {
      throw UsageError(where + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Option plumbing shared by the subcommands.

struct Opts {
  std::string config;
  std::string counts;
  int year = 0;
  std::vector<int> compare;
  std::string stations;
  std::string klass = "car";
  std::string window = "0-24";
  std::string morning = "7-10";
  std::string evening = "16-19";
  std::string policy;
  std::string day_type = "weekday";
  std::string station;
  std::string direction = "both";
  int month = 0;
  int top = 10;
  int outbound = 0;
  std::string out;

  // from the config file only
  std::map<int, std::string> counts_by_year;
  std::map<std::string, int> outbound_by_station;

  // synth only
  std::uint64_t seed = 1;
  int n_stations = 5;
  double dropout = 0.0;
  int border = 0;
  double weekend_factor = 0.6;
  double direction_split = 0.5;
};

// Fills flag targets that the user left untouched from the config file.
void merge_config(CLI::App* cmd, Opts& o) {
  if (o.config.empty()) return;
  const FileConfig cfg = load_config(o.config);

  auto fill = [&](const char* flag, const char* key, std::string& target) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    if (opt != nullptr && opt->count() > 0) return;
    const auto it = cfg.values.find(key);
    if (it != cfg.values.end()) target = it->second;
  };
  fill("--stations", "stations", o.stations);
  fill("--out", "out", o.out);
  fill("--class", "class", o.klass);
  fill("--policy", "policy", o.policy);
  fill("--window", "window", o.window);
  fill("--morning", "morning", o.morning);
  fill("--evening", "evening", o.evening);
  fill("--station", "station", o.station);
  fill("--day-type", "day_type", o.day_type);

  auto fill_int = [&](const char* flag, const char* key, int& target) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    if (opt != nullptr && opt->count() > 0) return;
    const auto it = cfg.values.find(key);
    if (it == cfg.values.end()) return;
    try {
      target = std::stoi(it->second);
    } catch (const std::exception&) {
      throw UsageError("config: bad integer for '" + std::string(key) + "'");
    }
  };
  fill_int("--month", "month", o.month);
  fill_int("--top", "top", o.top);

  // Year -> counts path entries only come from the file.
  if (const CLI::Option* opt = cmd->get_option_no_throw("--counts");
      (opt == nullptr || opt->count() == 0) && o.counts.empty() && o.year != 0) {
    const auto it = cfg.counts.find(o.year);
    if (it != cfg.counts.end()) o.counts = it->second;
  }
  o.counts_by_year = cfg.counts;
  if (const CLI::Option* opt = cmd->get_option_no_throw("--outbound");
      opt == nullptr || opt->count() == 0) {
    o.outbound_by_station = cfg.outbound;
  }
}

traffic::VehicleClass parse_class_arg(const std::string& s) {
  const auto v = traffic::parse_vehicle_class(s);
  if (!v) throw UsageError("bad --class '" + s + "' (car|truck|all)");
  return *v;
}

traffic::HourWindow parse_window_arg(const std::string& s, const char* what) {
  const auto w = traffic::parse_window(s);
  if (!w) throw UsageError(std::string("bad ") + what + " '" + s + "' (expected HH-HH)");
  return *w;
}

traffic::MissingPolicy parse_policy_arg(const std::string& s, traffic::MissingPolicy fallback) {
  if (s.empty()) return fallback;
  if (s == "strict") return traffic::MissingPolicy::Strict;
  if (s == "lenient") return traffic::MissingPolicy::Lenient;
  throw UsageError("bad --policy '" + s + "' (strict|lenient)");
}

traffic::DayType parse_day_type_arg(const std::string& s) {
  const auto t = traffic::parse_day_type(s);
  if (!t) throw UsageError("bad --day-type '" + s + "' (weekday|saturday|sunday)");
  return *t;
}

void require_inputs(const std::vector<std::string>& paths) {
  for (const auto& p : paths) {
    if (p.empty()) continue;
    if (!fs::exists(p)) throw UsageError("input file not found: " + p);
  }
}

fs::path require_out_dir(const std::string& out) {
  if (out.empty()) throw UsageError("--out is required");
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

// Resolves the (year, counts path) pairs a command operates on: either the
// single --year or the --compare pair, paths from --counts or the config's
// counts.<year> entries.
std::vector<std::pair<int, std::string>> resolve_years(const Opts& o) {
  std::vector<std::pair<int, std::string>> out;
  if (!o.compare.empty()) {
    if (o.compare.size() != 2) throw UsageError("--compare takes exactly two years");
    if (!o.counts.empty()) {
      throw UsageError("--compare reads counts.<year> config entries; drop --counts");
    }
    for (int year : o.compare) {
      const auto it = o.counts_by_year.find(year);
      if (it == o.counts_by_year.end()) {
        throw UsageError("no counts." + std::to_string(year) + " entry in config");
      }
      out.emplace_back(year, it->second);
    }
    return out;
  }
  if (o.year == 0) throw UsageError("--year is required");
  if (!o.counts.empty()) {
    out.emplace_back(o.year, o.counts);
    return out;
  }
  const auto it = o.counts_by_year.find(o.year);
  if (it == o.counts_by_year.end()) {
    throw UsageError("no counts file: pass --counts or a counts." + std::to_string(o.year) +
                     " config entry");
  }
  out.emplace_back(o.year, it->second);
  return out;
}

// ---------------------------------------------------------------------------
// Shared pipeline stages.

traffic::Dataset load_dataset(const std::string& counts_path, int year,
                              const std::string& stations_path) {
  traffic::ParsedCounts parsed = traffic::parse_counts_file(counts_path, year);
  if (parsed.report.malformed > 0) {
    log_warn(counts_path + ": skipped " + std::to_string(parsed.report.malformed) +
             " malformed row(s)");
  }
  if (parsed.report.duplicates > 0) {
    log_warn(counts_path + ": ignored " + std::to_string(parsed.report.duplicates) +
             " duplicate row(s)");
  }
  if (!stations_path.empty()) {
    traffic::StationFileResult st = traffic::parse_stations_file(stations_path);
    for (const auto& issue : st.rejected) {
      log_warn(stations_path + ":" + std::to_string(issue.line_no) + ": " + issue.reason);
    }
    parsed.dataset.stations = std::move(st.registry);
  }
  return std::move(parsed.dataset);
}

struct Prepared {
  traffic::Dataset staged;  // class-filtered; combined or single-direction
  traffic::CompletenessCalendar calendar;
  traffic::WeekSelection weeks;
  std::vector<traffic::HarmonizedSeries> series;
};

Prepared prepare(const traffic::Dataset& dataset, traffic::VehicleClass klass,
                 traffic::DirectionMode mode,
                 const std::optional<std::set<std::string>>& stations = std::nullopt) {
  Prepared p;
  traffic::Dataset filtered = traffic::filter_dataset(dataset, klass, stations);
  if (mode == traffic::DirectionMode::TwoWayCombined) {
    traffic::CombineResult combined = traffic::combine_directions(filtered);
    for (std::size_t i = 0; i < combined.mismatches.size() && i < 5; ++i) {
      const auto& m = combined.mismatches[i];
      log_warn("two-way record disagrees with its directional parts: station " + m.station_id +
               " " + traffic::format_date(m.date));
    }
    if (combined.mismatches.size() > 5) {
      log_warn("+" + std::to_string(combined.mismatches.size() - 5) + " more two-way mismatches");
    }
    p.staged = std::move(combined.dataset);
  } else {
    const traffic::Direction keep = mode == traffic::DirectionMode::Dir1Only
                                        ? traffic::Direction::Dir1
                                        : traffic::Direction::Dir2;
    p.staged = std::move(filtered);
    std::erase_if(p.staged.records,
                  [&](const traffic::TrafficRecord& r) { return r.direction != keep; });
  }
  p.calendar = traffic::completeness_calendar(p.staged, klass, traffic::kFullDay);
  p.weeks = traffic::select_weeks(p.calendar, dataset.year);
  p.series = traffic::weekday_average(p.staged, p.weeks);
  if (p.series.empty()) {
    log_warn("empty result: no usable records for class '" +
             std::string(traffic::to_string(klass)) + "' (" +
             std::string(traffic::to_string(mode)) + ")");
  }
  return p;
}

std::string year_tag(int year) { return std::to_string(year); }

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_synth(const Opts& o) {
  traffic::SynthConfig cfg;
  cfg.seed = o.seed;
  cfg.n_stations = o.n_stations;
  cfg.year = o.year == 0 ? cfg.year : o.year;
  cfg.weekend_factor = o.weekend_factor;
  cfg.dropout_rate = o.dropout;
  cfg.direction_split = o.direction_split;
  cfg.border_stations = o.border;

  traffic::Dataset ds;
  try {
    ds = traffic::generate(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const fs::path out = require_out_dir(o.out);
  atomic_write(out / ("counts_" + year_tag(ds.year) + ".csv"), traffic::counts_to_csv(ds));
  atomic_write(out / "stations.csv", traffic::stations_to_csv(ds.stations));
  return 0;
}

int cmd_ingest(const Opts& o) {
  const auto years = resolve_years(o);
  require_inputs({years.front().second, o.stations});
  const fs::path out = require_out_dir(o.out);
  const auto& [year, counts_path] = years.front();

  const fs::path report_path = out / "ingest_report.txt";
  traffic::ParsedCounts parsed;
  try {
    parsed = traffic::parse_counts_file(counts_path, year);
  } catch (const std::exception& e) {
    atomic_write(report_path, std::string("fatal: ") + e.what() + "\n");
    throw DataError(std::string(e.what()) + " (report: " + report_path.string() + ")");
  }
  if (!o.stations.empty()) {
    traffic::StationFileResult st = traffic::parse_stations_file(o.stations);
    for (const auto& issue : st.rejected) {
      log_warn(o.stations + ":" + std::to_string(issue.line_no) + ": " + issue.reason);
    }
    parsed.dataset.stations = std::move(st.registry);
  }

  atomic_write(report_path, traffic::report_to_text(parsed.report));
  if (parsed.report.rows_accepted == 0) {
    throw DataError("no rows accepted from " + counts_path +
                    " (report: " + report_path.string() + ")");
  }
  atomic_write(out / ("counts_" + year_tag(year) + ".csv"), traffic::counts_to_csv(parsed.dataset));
  if (!parsed.dataset.stations.empty()) {
    atomic_write(out / "stations.csv", traffic::stations_to_csv(parsed.dataset.stations));
  }
  atomic_write(out / "summary.csv", traffic::summary_to_csv(traffic::dataset_summary(parsed.dataset)));
  return 0;
}

int cmd_quality(const Opts& o) {
  const auto years = resolve_years(o);
  require_inputs({years.front().second, o.stations});
  const fs::path out = require_out_dir(o.out);
  const auto& [year, counts_path] = years.front();

  const traffic::VehicleClass klass = parse_class_arg(o.klass);
  const traffic::HourWindow window = parse_window_arg(o.window, "--window");
  const traffic::Dataset ds = load_dataset(counts_path, year, o.stations);

  traffic::CalendarScope scope;
  if (!o.station.empty()) scope.station_id = o.station;
  const traffic::CompletenessCalendar calendar =
      traffic::completeness_calendar(ds, klass, window, scope);
  if (calendar.zero_expectation) {
    log_warn("empty result: no series in scope; calendar has zero expectation");
  }
  const traffic::WeekSelection weeks = traffic::select_weeks(calendar, year);

  atomic_write(out / "calendar.csv", traffic::calendar_to_csv(calendar));
  atomic_write(out / "weeks.csv", traffic::selection_to_csv(weeks));
  const std::string title = "Completeness " + year_tag(year) + " class=" + o.klass +
                            " window=" + traffic::format_window(window) +
                            (o.station.empty() ? "" : " station=" + o.station);
  atomic_write(out / "calendar.svg", traffic::charts::calendar_heatmap(calendar, &weeks, title));
  return 0;
}

int cmd_harmonize(const Opts& o) {
  const auto years = resolve_years(o);
  require_inputs({years.front().second, o.stations});
  const fs::path out = require_out_dir(o.out);
  const auto& [year, counts_path] = years.front();

  const traffic::VehicleClass klass = parse_class_arg(o.klass);
  traffic::DirectionMode mode;
  if (o.direction == "both") {
    mode = traffic::DirectionMode::TwoWayCombined;
  } else if (o.direction == "dir1") {
    mode = traffic::DirectionMode::Dir1Only;
  } else if (o.direction == "dir2") {
    mode = traffic::DirectionMode::Dir2Only;
  } else {
    throw UsageError("bad --direction '" + o.direction + "' (both|dir1|dir2)");
  }

  std::optional<std::set<std::string>> station_filter;
  if (!o.station.empty()) station_filter = std::set<std::string>{o.station};

  const traffic::Dataset ds = load_dataset(counts_path, year, o.stations);
  const Prepared p = prepare(ds, klass, mode, station_filter);

  atomic_write(out / "harmonized.csv", traffic::harmonized_to_csv(p.series));
  atomic_write(out / "weeks.csv", traffic::selection_to_csv(p.weeks));
  return 0;
}

int cmd_trends(const Opts& o) {
  const auto years = resolve_years(o);
  std::vector<std::string> inputs{o.stations};
  for (const auto& [year, path] : years) inputs.push_back(path);
  require_inputs(inputs);
  const fs::path out = require_out_dir(o.out);

  const traffic::VehicleClass klass = parse_class_arg(o.klass);
  const traffic::HourWindow window = parse_window_arg(o.window, "--window");
  const traffic::MissingPolicy policy = parse_policy_arg(o.policy, traffic::MissingPolicy::Lenient);
  const traffic::DayType day_type = parse_day_type_arg(o.day_type);

  std::vector<traffic::MonthlyTrend> trends;
  for (const auto& [year, path] : years) {
    const traffic::Dataset ds = load_dataset(path, year, o.stations);
    const Prepared p = prepare(ds, klass, traffic::DirectionMode::TwoWayCombined);
    traffic::MonthlyTrend trend = traffic::monthly_totals(p.series, day_type, window, policy);
    trend.label = year_tag(year);
    trend.year = year;
    atomic_write(out / ("trend_" + year_tag(year) + ".csv"), traffic::trend_to_csv(trend));
    if (const auto share = traffic::percent_of_year(trend)) {
      atomic_write(out / ("share_" + year_tag(year) + ".csv"), traffic::trend_to_csv(*share));
    } else {
      log_warn("empty result: no monthly totals for " + year_tag(year) + "; share skipped");
    }
    trends.push_back(std::move(trend));
  }

  if (trends.size() == 2) {
    // The earlier year is the baseline regardless of argument order.
    const bool swapped = trends[0].year > trends[1].year;
    const traffic::MonthlyTrend& base = swapped ? trends[1] : trends[0];
    const traffic::MonthlyTrend& other = swapped ? trends[0] : trends[1];
    const traffic::TrendDelta delta = traffic::yoy_change(base, other);
    atomic_write(out / "delta.csv", traffic::delta_to_csv(delta));
  }

  const std::string title = "Monthly totals class=" + o.klass + " day_type=" + o.day_type +
                            " window=" + traffic::format_window(window);
  atomic_write(out / "trends.svg", traffic::charts::monthly_trend_lines(trends, title));
  return 0;
}

int cmd_hotspot(const Opts& o) {
  const auto years = resolve_years(o);
  if (o.stations.empty()) throw UsageError("--stations is required (coordinates come from it)");
  std::vector<std::string> inputs{o.stations};
  for (const auto& [year, path] : years) inputs.push_back(path);
  require_inputs(inputs);
  const fs::path out = require_out_dir(o.out);

  const traffic::VehicleClass klass = parse_class_arg(o.klass);
  const traffic::MissingPolicy policy = parse_policy_arg(o.policy, traffic::MissingPolicy::Strict);
  const traffic::HourWindow morning = parse_window_arg(o.morning, "--morning");
  const traffic::HourWindow evening = parse_window_arg(o.evening, "--evening");
  traffic::SummaryScope scope;
  scope.day_type = parse_day_type_arg(o.day_type);
  if (o.month != 0) scope.month = o.month;

  std::vector<std::vector<traffic::StationSummary>> per_year;
  for (const auto& [year, path] : years) {
    const traffic::Dataset ds = load_dataset(path, year, o.stations);
    const Prepared p = prepare(ds, klass, traffic::DirectionMode::TwoWayCombined);
    traffic::HotspotResult result =
        traffic::station_summaries(p.series, ds.stations, scope, policy, morning, evening);
    for (std::size_t i = 0; i < result.warnings.size() && i < 10; ++i) {
      log_warn(result.warnings[i]);
    }
    if (result.warnings.size() > 10) {
      log_warn("+" + std::to_string(result.warnings.size() - 10) + " more hotspot warnings");
    }
    atomic_write(out / ("hotspot_" + year_tag(year) + ".csv"),
                 traffic::summaries_to_csv(result.summaries));
    atomic_write(out / ("hotspot_" + year_tag(year) + ".geojson"),
                 traffic::summaries_to_geojson(result.summaries));
    const std::string title = "Rush-hour hotspots " + year_tag(year) + " class=" + o.klass;
    atomic_write(out / ("hotspot_" + year_tag(year) + ".svg"),
                 traffic::charts::hotspot_bubbles(result.summaries, title));
    per_year.push_back(std::move(result.summaries));
  }

  if (per_year.size() == 2) {
    const bool swapped = years[0].first > years[1].first;
    const auto& base = swapped ? per_year[1] : per_year[0];
    const auto& other = swapped ? per_year[0] : per_year[1];
    const std::vector<traffic::StationChange> changes = traffic::rank_changes(base, other, o.top);
    atomic_write(out / "changes.csv", traffic::changes_to_csv(changes));
  }
  return 0;
}

int cmd_crossborder(const Opts& o) {
  const auto years = resolve_years(o);
  if (o.station.empty()) throw UsageError("--station is required");
  std::vector<std::string> inputs{o.stations};
  for (const auto& [year, path] : years) inputs.push_back(path);
  require_inputs(inputs);
  const fs::path out = require_out_dir(o.out);

  const traffic::VehicleClass klass = parse_class_arg(o.klass);
  const traffic::DayType day_type = parse_day_type_arg(o.day_type);
  const traffic::HourWindow morning = parse_window_arg(o.morning, "--morning");
  const traffic::HourWindow evening = parse_window_arg(o.evening, "--evening");
  const int month = o.month == 0 ? 1 : o.month;
  if (month < 1 || month > 12) throw UsageError("--month must be 1..12");

  int outbound = o.outbound;
  if (outbound == 0) {
    const auto it = o.outbound_by_station.find(o.station);
    if (it != o.outbound_by_station.end()) outbound = it->second;
  }
  if (outbound == 0) {
    outbound = 1;
    log_warn("no outbound declaration for " + o.station + "; assuming direction 1");
  }
  if (outbound != 1 && outbound != 2) throw UsageError("--outbound must be 1 or 2");

  std::string peaks = "year,direction,day,hour,value\n";
  std::vector<traffic::MonthlyFeatures> rush_out;
  std::vector<traffic::MonthlyFeatures> rush_in;
  for (const auto& [year, path] : years) {
    const traffic::Dataset ds = load_dataset(path, year, o.stations);
    traffic::CalendarScope scope;
    scope.station_id = o.station;
    const traffic::CompletenessCalendar calendar =
        traffic::completeness_calendar(ds, klass, traffic::kFullDay, scope);
    const traffic::WeekSelection weeks = traffic::select_weeks(calendar, year);

    traffic::DirectionalSeries series;
    try {
      series = traffic::directional_series(ds, o.station, klass, weeks);
    } catch (const std::runtime_error& e) {
      throw DataError(e.what());
    }

    const traffic::HourlyMatrix m1 = traffic::hourly_matrix(series.dir1, month);
    const traffic::HourlyMatrix m2 = traffic::hourly_matrix(series.dir2, month);
    atomic_write(out / ("matrix_dir1_" + year_tag(year) + ".csv"), traffic::matrix_to_csv(m1));
    atomic_write(out / ("matrix_dir2_" + year_tag(year) + ".csv"), traffic::matrix_to_csv(m2));
    const std::string base_title =
        o.station + " " + year_tag(year) + "-" + (month < 10 ? "0" : "") + std::to_string(month);
    atomic_write(out / ("matrix_dir1_" + year_tag(year) + ".svg"),
                 traffic::charts::matrix_heatmap(m1, base_title + " direction 1"));
    atomic_write(out / ("matrix_dir2_" + year_tag(year) + ".svg"),
                 traffic::charts::matrix_heatmap(m2, base_title + " direction 2"));

    for (const auto* m : {&m1, &m2}) {
      try {
        const traffic::PeakCell peak = traffic::peak_cell(*m);
        peaks += year_tag(year);
        peaks += m == &m1 ? ",1," : ",2,";
        peaks += std::to_string(peak.day_of_week);
        peaks += ',';
        peaks += std::to_string(peak.hour);
        peaks += ',';
        traffic::csv::append_double(peaks, peak.value);
        peaks += '\n';
      } catch (const std::runtime_error&) {
        log_warn("no present cells in " + year_tag(year) + " matrix; peak skipped");
      }
    }

    const traffic::HarmonizedSeries& out_series = outbound == 1 ? series.dir1 : series.dir2;
    const traffic::HarmonizedSeries& in_series = outbound == 1 ? series.dir2 : series.dir1;
    rush_out.push_back(traffic::monthly_rush(out_series, day_type, morning, evening));
    rush_in.push_back(traffic::monthly_rush(in_series, day_type, morning, evening));
  }
  atomic_write(out / "peaks.csv", peaks);

  if (years.size() == 2) {
    const bool swapped = years[0].first > years[1].first;
    const std::size_t b = swapped ? 1 : 0;
    const std::size_t v = swapped ? 0 : 1;
    const traffic::BalanceTable table = traffic::direction_balance_change(
        o.station, day_type, rush_out[b], rush_in[b], rush_out[v], rush_in[v]);
    atomic_write(out / "balance.csv", traffic::balance_to_csv(table));
    const std::string title = "Direction balance change " + o.station + " " + o.day_type;
    atomic_write(out / "balance.svg", traffic::charts::balance_bars(table, title));
  }
  return 0;
}

int cmd_report(const Opts& o) {
  if (o.config.empty()) throw UsageError("report requires --config");
  if (o.counts_by_year.empty()) throw UsageError("config needs at least one counts.<year> entry");
  if (o.stations.empty()) throw UsageError("config needs a stations entry");

  std::vector<std::string> inputs{o.stations};
  for (const auto& [year, path] : o.counts_by_year) inputs.push_back(path);
  require_inputs(inputs);
  const fs::path out = require_out_dir(o.out);

  const traffic::VehicleClass klass = parse_class_arg(o.klass);
  const traffic::HourWindow window = parse_window_arg(o.window, "window");
  const traffic::HourWindow morning = parse_window_arg(o.morning, "morning");
  const traffic::HourWindow evening = parse_window_arg(o.evening, "evening");
  const traffic::MissingPolicy policy = parse_policy_arg(o.policy, traffic::MissingPolicy::Lenient);
  const traffic::DayType day_type = parse_day_type_arg(o.day_type);

  struct YearRun {
    int year;
    traffic::Dataset dataset;
    Prepared prepared;
    traffic::MonthlyTrend trend;
    std::vector<traffic::StationSummary> summaries;
  };
  std::vector<YearRun> runs;

  for (const auto& [year, path] : o.counts_by_year) {
    YearRun run;
    run.year = year;
    run.dataset = load_dataset(path, year, o.stations);
    const std::string tag = year_tag(year);

    atomic_write(out / ("summary_" + tag + ".csv"),
                 traffic::summary_to_csv(traffic::dataset_summary(run.dataset)));

    // Completeness + representative weeks on the raw (per-direction) data.
    const traffic::CompletenessCalendar calendar =
        traffic::completeness_calendar(run.dataset, klass, window);
    const traffic::WeekSelection weeks = traffic::select_weeks(calendar, year);
    atomic_write(out / ("calendar_" + tag + ".csv"), traffic::calendar_to_csv(calendar));
    atomic_write(out / ("weeks_" + tag + ".csv"), traffic::selection_to_csv(weeks));
    atomic_write(out / ("calendar_" + tag + ".svg"),
                 traffic::charts::calendar_heatmap(
                     calendar, &weeks, "Completeness " + tag + " class=" + o.klass));

    run.prepared = prepare(run.dataset, klass, traffic::DirectionMode::TwoWayCombined);
    atomic_write(out / ("harmonized_" + tag + ".csv"),
                 traffic::harmonized_to_csv(run.prepared.series));

    run.trend = traffic::monthly_totals(run.prepared.series, day_type, traffic::kFullDay, policy);
    run.trend.label = tag;
    run.trend.year = year;
    atomic_write(out / ("trend_" + tag + ".csv"), traffic::trend_to_csv(run.trend));
    if (const auto share = traffic::percent_of_year(run.trend)) {
      atomic_write(out / ("share_" + tag + ".csv"), traffic::trend_to_csv(*share));
    }

    traffic::SummaryScope scope;
    scope.day_type = day_type;
    if (o.month != 0) scope.month = o.month;
    traffic::HotspotResult hotspots = traffic::station_summaries(
        run.prepared.series, run.dataset.stations, scope, policy, morning, evening);
    for (std::size_t i = 0; i < hotspots.warnings.size() && i < 10; ++i) {
      log_warn(hotspots.warnings[i]);
    }
    atomic_write(out / ("hotspot_" + tag + ".csv"),
                 traffic::summaries_to_csv(hotspots.summaries));
    atomic_write(out / ("hotspot_" + tag + ".geojson"),
                 traffic::summaries_to_geojson(hotspots.summaries));
    atomic_write(out / ("hotspot_" + tag + ".svg"),
                 traffic::charts::hotspot_bubbles(hotspots.summaries,
                                                  "Rush-hour hotspots " + tag));
    run.summaries = std::move(hotspots.summaries);
    runs.push_back(std::move(run));
  }

  std::vector<traffic::MonthlyTrend> trends;
  for (const auto& run : runs) trends.push_back(run.trend);
  atomic_write(out / "trends.svg",
               traffic::charts::monthly_trend_lines(
                   trends, "Monthly totals class=" + o.klass + " day_type=" + o.day_type));

  if (runs.size() >= 2) {
    // First two years ascending: earlier is the baseline.
    const YearRun& base = runs[0];
    const YearRun& other = runs[1];
    atomic_write(out / "delta.csv",
                 traffic::delta_to_csv(traffic::yoy_change(base.trend, other.trend)));
    atomic_write(out / "changes.csv",
                 traffic::changes_to_csv(
                     traffic::rank_changes(base.summaries, other.summaries, o.top)));
  }

  if (!o.station.empty()) {
    Opts cb = o;
    cb.month = o.month == 0 ? 1 : o.month;
    if (o.counts_by_year.size() >= 2) {
      cb.compare.clear();
      auto it = o.counts_by_year.begin();
      cb.compare.push_back(it->first);
      ++it;
      cb.compare.push_back(it->first);
    } else {
      cb.year = o.counts_by_year.begin()->first;
      cb.counts = o.counts_by_year.begin()->second;
    }
    cmd_crossborder(cb);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();

  CLI::App app{"harmonize hourly road-traffic counts and reproduce the standard analyses"};
  app.require_subcommand(1);

  Opts o;

  auto add_common = [&](CLI::App* cmd, bool with_year) {
    cmd->add_option("--config", o.config, "flat key=value config file; flags override");
    if (with_year) {
      cmd->add_option("--counts", o.counts, "hourly counts CSV");
      cmd->add_option("--year", o.year, "calendar year of the counts file");
    }
    cmd->add_option("--stations", o.stations, "station metadata CSV");
    cmd->add_option("--class", o.klass, "vehicle class: car|truck|all (default car)");
    cmd->add_option("--out", o.out, "output directory");
  };

  CLI::App* synth = app.add_subcommand("synth", "generate a deterministic synthetic dataset");
  synth->add_option("--seed", o.seed, "generator seed (default 1)");
  synth->add_option("--stations", o.n_stations, "station count (default 5)");
  synth->add_option("--year", o.year, "calendar year (default 2018)");
  synth->add_option("--dropout", o.dropout, "missing-cell rate in [0,1] (default 0)");
  synth->add_option("--border", o.border, "number of border-tagged stations (default 0)");
  synth->add_option("--weekend-factor", o.weekend_factor, "weekend scale factor (default 0.6)");
  synth->add_option("--split", o.direction_split, "direction 1 share in (0,1) (default 0.5)");
  synth->add_option("--out", o.out, "output directory");

  CLI::App* ingest = app.add_subcommand("ingest", "validate counts and write canonical exports");
  add_common(ingest, true);

  CLI::App* quality = app.add_subcommand("quality", "completeness calendar and week selection");
  add_common(quality, true);
  quality->add_option("--window", o.window, "hour window HH-HH (default 0-24)");
  quality->add_option("--station", o.station, "restrict the calendar to one station");

  CLI::App* harmonize = app.add_subcommand("harmonize", "representative hourly profiles");
  add_common(harmonize, true);
  harmonize->add_option("--direction", o.direction, "both|dir1|dir2 (default both)");
  harmonize->add_option("--station", o.station, "restrict to one station");

  CLI::App* trends = app.add_subcommand("trends", "monthly totals and year-over-year change");
  add_common(trends, true);
  trends->add_option("--compare", o.compare, "two years; counts come from the config")
      ->expected(2);
  trends->add_option("--window", o.window, "hour window HH-HH (default 0-24)");
  trends->add_option("--day-type", o.day_type, "weekday|saturday|sunday (default weekday)");
  trends->add_option("--policy", o.policy, "station pooling: strict|lenient (default lenient)");

  CLI::App* hotspot = app.add_subcommand("hotspot", "station rush-hour summaries and ranking");
  add_common(hotspot, true);
  hotspot->add_option("--compare", o.compare, "two years; counts come from the config")
      ->expected(2);
  hotspot->add_option("--month", o.month, "restrict the scope to one month");
  hotspot->add_option("--day-type", o.day_type, "weekday|saturday|sunday (default weekday)");
  hotspot->add_option("--policy", o.policy, "strict|lenient (default strict)");
  hotspot->add_option("--morning", o.morning, "morning window (default 7-10)");
  hotspot->add_option("--evening", o.evening, "evening window (default 16-19)");
  hotspot->add_option("--top", o.top, "rows in the change ranking (default 10)");

  CLI::App* crossborder =
      app.add_subcommand("crossborder", "directional matrices, peaks, and balance");
  add_common(crossborder, true);
  crossborder->add_option("--compare", o.compare, "two years; counts come from the config")
      ->expected(2);
  crossborder->add_option("--station", o.station, "station to analyse (required)");
  crossborder->add_option("--month", o.month, "month for the hourly matrix (default 1)");
  crossborder->add_option("--day-type", o.day_type, "weekday|saturday|sunday (default weekday)");
  crossborder->add_option("--morning", o.morning, "morning window (default 7-10)");
  crossborder->add_option("--evening", o.evening, "evening window (default 16-19)");
  crossborder->add_option("--outbound", o.outbound, "outbound direction 1|2");

  CLI::App* report = app.add_subcommand("report", "full pipeline from a config file");
  report->add_option("--config", o.config, "config file (required)")->required();
  report->add_option("--month", o.month, "hotspot scope / matrix month");
  report->add_option("--station", o.station, "border station for the directional analysis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    merge_config(active, o);
    if (active == synth) return cmd_synth(o);
    if (active == ingest) return cmd_ingest(o);
    if (active == quality) return cmd_quality(o);
    if (active == harmonize) return cmd_harmonize(o);
    if (active == trends) return cmd_trends(o);
    if (active == hotspot) return cmd_hotspot(o);
    if (active == crossborder) return cmd_crossborder(o);
    if (active == report) return cmd_report(o);
    throw UsageError("unknown subcommand");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
