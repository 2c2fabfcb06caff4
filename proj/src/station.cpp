#include "kevt/station.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "kevt/error.hpp"

namespace kevt {
namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::sys_days;
using std::chrono::year;
using std::chrono::year_month_day;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool is_missing_token(const std::string& s) {
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "-999" || s == "-999.0";
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct RawRow {
  year_month_day date;
  std::optional<double> value;
};

StationSeries finish_station(const std::string& id, std::vector<RawRow> rows,
                             std::vector<RejectedRow>& rejects) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const RawRow& a, const RawRow& b) { return sys_days{a.date} < sys_days{b.date}; });
  StationSeries s;
  s.station_id = id;
  for (auto& r : rows) {
    if (!s.dates.empty() && s.dates.back() == r.date) {
      rejects.push_back({0, "duplicate date " + format_iso_date(r.date) + " for station " + id});
      continue;
    }
    s.dates.push_back(r.date);
    s.values.push_back(r.value ? *r.value : std::nan(""));
  }

  std::vector<std::size_t> known;
  for (std::size_t i = 0; i < s.values.size(); ++i)
    if (!std::isnan(s.values[i])) known.push_back(i);
  const std::size_t missing = s.values.size() - known.size();
  s.flagged = static_cast<double>(missing) > kMissingFlagFraction * static_cast<double>(s.values.size());
  if (known.empty()) {
    s.flagged = true;
    return s;
  }
  auto day_no = [&](std::size_t i) { return static_cast<double>(sys_days{s.dates[i]}.time_since_epoch().count()); };
  std::size_t next = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (!std::isnan(s.values[i])) continue;
    while (next < known.size() && known[next] < i) ++next;
    if (next == 0) {
      s.values[i] = s.values[known.front()];
    } else if (next == known.size()) {
      s.values[i] = s.values[known.back()];
    } else {
      const std::size_t a = known[next - 1], b = known[next];
      const double t = (day_no(i) - day_no(a)) / (day_no(b) - day_no(a));
      s.values[i] = s.values[a] + t * (s.values[b] - s.values[a]);
    }
    ++s.missing_filled;
  }
  return s;
}

}  // namespace

year_month_day parse_iso_date(const std::string& text) {
  int y = 0;
  unsigned m = 0, d = 0;
  char dash1 = 0, dash2 = 0;
  std::istringstream is(text);
  if (!(is >> y >> dash1 >> m >> dash2 >> d) || dash1 != '-' || dash2 != '-' || !is.eof())
    throw DataError("not an ISO-8601 date: '" + text + "'");
  // "2020-1-5" style is rejected: width must be exact.
  if (text.size() != 10) throw DataError("not an ISO-8601 date: '" + text + "'");
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) throw DataError("invalid calendar date: '" + text + "'");
  return ymd;
}

std::string format_iso_date(year_month_day d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

IngestResult ingest_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("CSV input is empty");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM
  const auto header = split_csv_line(line);
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("CSV header lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ci_station = column(schema.station_col);
  const std::size_t ci_date = column(schema.date_col);
  const std::size_t ci_value = column(schema.value_col);
  const std::size_t need = std::max({ci_station, ci_date, ci_value}) + 1;

  IngestResult result;
  std::map<std::string, std::vector<RawRow>> by_station;
  std::vector<std::string> order;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() < need) {
      result.rejects.push_back({line_no, "too few columns"});
      continue;
    }
    RawRow row;
    try {
      row.date = parse_iso_date(cells[ci_date]);
    } catch (const DataError& e) {
      result.rejects.push_back({line_no, e.what()});
      continue;
    }
    const std::string& vtext = cells[ci_value];
    if (!is_missing_token(vtext)) {
      row.value = parse_number(vtext);
      if (!row.value) {
        result.rejects.push_back({line_no, "unparseable value '" + vtext + "'"});
        continue;
      }
    }
    const std::string& id = cells[ci_station];
    if (!by_station.count(id)) order.push_back(id);
    by_station[id].push_back(row);
  }
  for (const auto& id : order)
    result.stations.push_back(finish_station(id, std::move(by_station[id]), result.rejects));
  return result;
}

IngestResult ingest_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return ingest_csv(in, schema);
}

BlockMaxSeries yearly_block_maxima(const StationSeries& s) {
  BlockMaxSeries out;
  out.block_length = 365;
  out.source_label = s.station_id;
  std::size_t i = 0;
  while (i < s.dates.size()) {
    const year y = s.dates[i].year();
    std::size_t j = i;
    double mx = -std::numeric_limits<double>::infinity();
    bool finite = true;
    while (j < s.dates.size() && s.dates[j].year() == y) {
      if (std::isnan(s.values[j])) finite = false;
      mx = std::max(mx, s.values[j]);
      ++j;
    }
    // Dates are unique and sorted, so a full year has exactly 365/366 rows.
    const std::size_t days_in_year = y.is_leap() ? 366 : 365;
    if (j - i == days_in_year && finite) out.maxima.push_back(mx);
    i = j;
  }
  if (out.maxima.empty())
    throw InsufficientData("station " + s.station_id + " has no complete calendar year");
  out.n_blocks = out.maxima.size();
  return out;
}

BlockMaxSeries pooled_yearly_maxima(const std::vector<StationSeries>& stations) {
  BlockMaxSeries out;
  out.block_length = 365;
  std::size_t contributing = 0;
  for (const auto& s : stations) {
    try {
      const BlockMaxSeries one = yearly_block_maxima(s);
      out.maxima.insert(out.maxima.end(), one.maxima.begin(), one.maxima.end());
      ++contributing;
    } catch (const InsufficientData&) {
    }
  }
  out.source_label = "pooled:" + std::to_string(contributing);
  if (out.maxima.empty()) throw InsufficientData("no station has a complete calendar year");
  out.n_blocks = out.maxima.size();
  return out;
}

}  // namespace kevt
