#include "traffic/charts.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

namespace traffic::charts {

namespace {

// Fixed two-decimal formatting keeps the markup byte-stable.
std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string esc(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c; break;
    }
  }
  return out;
}

std::string svg_open(double width, double height) {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  out += num(width);
  out += "\" height=\"";
  out += num(height);
  out += "\" viewBox=\"0 0 ";
  out += num(width);
  out += ' ';
  out += num(height);
  out += "\" font-family=\"sans-serif\">\n";
  return out;
}

void add_rect(std::string& out, double x, double y, double w, double h,
              std::string_view fill, std::string_view extra = {}) {
  out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\" fill=\"";
  out += fill;
  out += '"';
  if (!extra.empty()) {
    out += ' ';
    out += extra;
  }
  out += "/>\n";
}

void add_line(std::string& out, double x1, double y1, double x2, double y2,
              std::string_view stroke, double stroke_width = 1.0) {
  out += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
         "\" y2=\"" + num(y2) + "\" stroke=\"";
  out += stroke;
  out += "\" stroke-width=\"" + num(stroke_width) + "\"/>\n";
}

void add_text(std::string& out, double x, double y, std::string_view text,
              double size = 10.0, std::string_view extra = {}) {
  out += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) + '"';
  if (!extra.empty()) {
    out += ' ';
    out += extra;
  }
  out += '>';
  out += esc(text);
  out += "</text>\n";
}

void add_circle(std::string& out, double cx, double cy, double r, std::string_view fill,
                std::string_view extra = {}) {
  out += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"";
  out += fill;
  out += '"';
  if (!extra.empty()) {
    out += ' ';
    out += extra;
  }
  out += "/>\n";
}

// Linear white-to-blue ramp; t is clamped to [0,1].
std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(239.0 + t * (8.0 - 239.0)));
  const int g = static_cast<int>(std::lround(243.0 + t * (81.0 - 243.0)));
  const int b = static_cast<int>(std::lround(255.0 + t * (156.0 - 255.0)));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

constexpr std::string_view kMissingFill = "#e0e0e0";
constexpr std::string_view kPalette[4] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"};
constexpr std::string_view kMonthNames[12] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                              "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
constexpr std::string_view kDayNames[7] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};

}  // namespace

std::string calendar_heatmap(const CompletenessCalendar& calendar,
                             const WeekSelection* selection, std::string_view title) {
  using std::chrono::sys_days;

  const double cell = 12.0;
  const double left = 36.0;
  const double top = 44.0;

  // Columns are Monday-anchored weeks; the week containing January 1 is column 0.
  const Date jan1 = make_date(calendar.year, 1, 1);
  const sys_days origin = sys_days(jan1) - std::chrono::days(iso_weekday(jan1) - 1);
  auto column_of = [&](const Date& d) {
    return static_cast<int>((sys_days(d) - origin).count() / 7);
  };
  const int n_cols = column_of(make_date(calendar.year, 12, 31)) + 1;

  const double width = left + n_cols * cell + 16.0;
  const double height = top + 7 * cell + 20.0;
  std::string out = svg_open(width, height);
  add_text(out, left, 18.0, title, 13.0, "font-weight=\"bold\"");

  for (int row = 0; row < 7; ++row) {
    add_text(out, 4.0, top + row * cell + 9.0, kDayNames[row], 8.0);
  }

  int last_label_month = 0;
  for (const Date& d : dates_of_year(calendar.year)) {
    const int col = column_of(d);
    const int row = iso_weekday(d) - 1;
    const double x = left + col * cell;
    const double y = top + row * cell;
    if (static_cast<int>(month_of(d)) != last_label_month && day_of(d) <= 7 && row == 0) {
      last_label_month = static_cast<int>(month_of(d));
      add_text(out, x, top - 6.0, kMonthNames[last_label_month - 1], 8.0);
    }
    std::string fill{kMissingFill};
    if (!calendar.zero_expectation) {
      const auto it = calendar.cells.find(d);
      if (it != calendar.cells.end()) fill = ramp(it->second);
    }
    add_rect(out, x + 1.0, y + 1.0, cell - 2.0, cell - 2.0, fill);
  }

  if (selection != nullptr) {
    for (const auto& choice : selection->months) {
      if (!choice) continue;
      const int col = column_of(choice->week_start);
      add_rect(out, left + col * cell + 0.5, top + 0.5, cell - 1.0, 7 * cell - 1.0, "none",
               "stroke=\"#d62728\" stroke-width=\"1.50\"");
    }
  }

  out += "</svg>\n";
  return out;
}

std::string monthly_trend_lines(std::span<const MonthlyTrend> trends, std::string_view title) {
  const double left = 56.0;
  const double top = 40.0;
  const double plot_w = 480.0;
  const double plot_h = 220.0;
  const double width = left + plot_w + 20.0;
  const double height = top + plot_h + 40.0;

  double v_max = 0.0;
  for (const auto& t : trends) {
    for (const auto& v : t.values) {
      if (v) v_max = std::max(v_max, *v);
    }
  }
  if (v_max <= 0.0) v_max = 1.0;

  auto x_of = [&](int month) { return left + (month - 0.5) * plot_w / 12.0; };
  auto y_of = [&](double v) { return top + plot_h - v / v_max * plot_h; };

  std::string out = svg_open(width, height);
  add_text(out, left, 18.0, title, 13.0, "font-weight=\"bold\"");
  add_line(out, left, top, left, top + plot_h, "#555555");
  add_line(out, left, top + plot_h, left + plot_w, top + plot_h, "#555555");

  for (int tick = 0; tick <= 4; ++tick) {
    const double v = v_max * tick / 4.0;
    const double y = y_of(v);
    add_line(out, left - 4.0, y, left, y, "#555555");
    add_text(out, 4.0, y + 3.0, num(v), 8.0);
  }
  for (int month = 1; month <= 12; ++month) {
    add_text(out, x_of(month) - 8.0, top + plot_h + 14.0, kMonthNames[month - 1], 8.0);
  }

  std::size_t color_idx = 0;
  for (const auto& trend : trends) {
    const std::string_view color = kPalette[color_idx % 4];
    // A missing month splits the series into separate polylines.
    std::string points;
    auto flush = [&]() {
      if (points.empty()) return;
      out += "<polyline fill=\"none\" stroke=\"";
      out += color;
      out += "\" stroke-width=\"1.50\" points=\"" + points + "\"/>\n";
      points.clear();
    };
    for (int month = 1; month <= 12; ++month) {
      const auto& v = trend.values[static_cast<std::size_t>(month - 1)];
      if (!v) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += num(x_of(month)) + "," + num(y_of(*v));
      add_circle(out, x_of(month), y_of(*v), 2.0, color);
    }
    flush();
    add_text(out, left + plot_w - 120.0, top + 12.0 + 12.0 * static_cast<double>(color_idx),
             trend.label, 9.0, std::string("fill=\"") + std::string(color) + "\"");
    ++color_idx;
  }

  out += "</svg>\n";
  return out;
}

std::string hotspot_bubbles(std::span<const StationSummary> summaries, std::string_view title) {
  const double left = 40.0;
  const double top = 40.0;
  const double plot_w = 420.0;
  const double plot_h = 320.0;
  const double width = left + plot_w + 20.0;
  const double height = top + plot_h + 20.0;

  double lat_min = 90.0, lat_max = -90.0, lon_min = 180.0, lon_max = -180.0;
  double total_max = 0.0, asym_max = 0.0;
  std::size_t n_placed = 0;
  for (const auto& s : summaries) {
    if (!s.latitude || !s.longitude) continue;
    ++n_placed;
    lat_min = std::min(lat_min, *s.latitude);
    lat_max = std::max(lat_max, *s.latitude);
    lon_min = std::min(lon_min, *s.longitude);
    lon_max = std::max(lon_max, *s.longitude);
    total_max = std::max(total_max, s.total_volume);
    asym_max = std::max(asym_max, std::fabs(s.asymmetry));
  }
  if (lat_max <= lat_min) lat_max = lat_min + 1e-6;
  if (lon_max <= lon_min) lon_max = lon_min + 1e-6;
  if (total_max <= 0.0) total_max = 1.0;
  if (asym_max <= 0.0) asym_max = 1.0;

  auto x_of = [&](double lon) { return left + (lon - lon_min) / (lon_max - lon_min) * plot_w; };
  auto y_of = [&](double lat) { return top + (lat_max - lat) / (lat_max - lat_min) * plot_h; };

  std::string out = svg_open(width, height);
  add_text(out, left, 18.0, title, 13.0, "font-weight=\"bold\"");
  add_rect(out, left, top, plot_w, plot_h, "none", "stroke=\"#bbbbbb\"");
  if (n_placed == 0) {
    add_text(out, left + 12.0, top + 20.0, "no stations with coordinates", 10.0);
    out += "</svg>\n";
    return out;
  }

  for (const auto& s : summaries) {
    if (!s.latitude || !s.longitude) continue;
    const double r = 3.0 + 11.0 * std::sqrt(std::fabs(s.asymmetry) / asym_max);
    add_circle(out, x_of(*s.longitude), y_of(*s.latitude), r, ramp(s.total_volume / total_max),
               "stroke=\"#333333\" stroke-width=\"0.50\" fill-opacity=\"0.85\"");
    add_text(out, x_of(*s.longitude) + r + 2.0, y_of(*s.latitude) + 3.0, s.station_id, 7.0);
  }

  out += "</svg>\n";
  return out;
}

std::string matrix_heatmap(const HourlyMatrix& matrix, std::string_view title) {
  const double cell = 20.0;
  const double left = 40.0;
  const double top = 44.0;
  const double width = left + 24 * cell + 16.0;
  const double height = top + 7 * cell + 24.0;

  double v_max = 0.0;
  for (const auto& row : matrix.values) {
    for (const auto& v : row) {
      if (v) v_max = std::max(v_max, *v);
    }
  }
  if (v_max <= 0.0) v_max = 1.0;

  std::string out = svg_open(width, height);
  add_text(out, left, 18.0, title, 13.0, "font-weight=\"bold\"");

  for (int dow = 1; dow <= 7; ++dow) {
    add_text(out, 4.0, top + (dow - 0.5) * cell + 3.0, kDayNames[dow - 1], 9.0);
    for (int hour = 0; hour < 24; ++hour) {
      const auto& v = matrix.at(dow, hour);
      const std::string fill = v ? ramp(*v / v_max) : std::string(kMissingFill);
      add_rect(out, left + hour * cell + 1.0, top + (dow - 1) * cell + 1.0, cell - 2.0,
               cell - 2.0, fill);
    }
  }
  for (int hour = 0; hour < 24; hour += 3) {
    char label[8];
    std::snprintf(label, sizeof(label), "%02d", hour);
    add_text(out, left + hour * cell + 4.0, top + 7 * cell + 14.0, label, 8.0);
  }

  out += "</svg>\n";
  return out;
}

std::string balance_bars(const BalanceTable& table, std::string_view title) {
  const double left = 56.0;
  const double top = 40.0;
  const double plot_w = 480.0;
  const double plot_h = 220.0;
  const double width = left + plot_w + 20.0;
  const double height = top + plot_h + 40.0;

  double v_max = 0.0;
  for (const auto* cells : {&table.morning, &table.evening}) {
    for (const auto& c : *cells) {
      if (c.change) v_max = std::max(v_max, std::fabs(*c.change));
    }
  }
  if (v_max <= 0.0) v_max = 1.0;

  const double y_zero = top + plot_h / 2.0;
  auto y_of = [&](double v) { return y_zero - v / v_max * (plot_h / 2.0); };
  const double slot = plot_w / 12.0;
  const double bar_w = slot * 0.32;

  std::string out = svg_open(width, height);
  add_text(out, left, 18.0, title, 13.0, "font-weight=\"bold\"");
  add_line(out, left, y_zero, left + plot_w, y_zero, "#555555");
  add_line(out, left, top, left, top + plot_h, "#555555");
  for (int tick = -2; tick <= 2; ++tick) {
    const double v = v_max * tick / 2.0;
    add_line(out, left - 4.0, y_of(v), left, y_of(v), "#555555");
    add_text(out, 4.0, y_of(v) + 3.0, num(v), 8.0);
  }

  for (int month = 1; month <= 12; ++month) {
    const double x0 = left + (month - 1) * slot + slot * 0.12;
    const auto& m = table.morning[static_cast<std::size_t>(month - 1)];
    const auto& e = table.evening[static_cast<std::size_t>(month - 1)];
    if (m.change) {
      const double y = y_of(*m.change);
      add_rect(out, x0, std::min(y, y_zero), bar_w, std::fabs(y - y_zero), kPalette[0]);
    }
    if (e.change) {
      const double y = y_of(*e.change);
      add_rect(out, x0 + bar_w + slot * 0.08, std::min(y, y_zero), bar_w, std::fabs(y - y_zero),
               kPalette[3]);
    }
    add_text(out, left + (month - 0.5) * slot - 8.0, top + plot_h + 14.0, kMonthNames[month - 1],
             8.0);
  }
  add_text(out, left + plot_w - 130.0, top + 12.0, "morning", 9.0,
           std::string("fill=\"") + std::string(kPalette[0]) + "\"");
  add_text(out, left + plot_w - 70.0, top + 12.0, "evening", 9.0,
           std::string("fill=\"") + std::string(kPalette[3]) + "\"");

  out += "</svg>\n";
  return out;
}

}  // namespace traffic::charts
