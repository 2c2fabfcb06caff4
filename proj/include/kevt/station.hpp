#pragma once

#include <chrono>
#include <iosfwd>
#include <string>
#include <vector>

#include "kevt/blocks.hpp"

namespace kevt {

/// Daily series of one station, sorted by date, gaps in the values filled.
struct StationSeries {
  std::string station_id;
  std::vector<std::chrono::year_month_day> dates;
  std::vector<double> values;
  std::size_t missing_filled = 0;
  /// More than 5% of the values were missing.
  bool flagged = false;
};

struct CsvSchema {
  std::string station_col = "station";
  std::string date_col = "date";
  std::string value_col = "value";
};

struct RejectedRow {
  std::size_t line = 0;
  std::string reason;
};

struct IngestResult {
  std::vector<StationSeries> stations;
  std::vector<RejectedRow> rejects;
};

inline constexpr double kMissingFlagFraction = 0.05;

/// Comma-separated, header row first, ISO-8601 dates. Empty, NA, NaN and
/// -999 values count as missing and are filled by linear interpolation in
/// time (constant extrapolation at the ends). Unparseable rows and
/// duplicate dates go to the rejects list.
IngestResult ingest_csv(std::istream& in, const CsvSchema& schema = {});
IngestResult ingest_csv(const std::string& path, const CsvSchema& schema = {});

/// One maximum per complete calendar year (a row for every day of the year).
/// Throws InsufficientData when no year is complete.
BlockMaxSeries yearly_block_maxima(const StationSeries& s);

/// Concatenation of the yearly maxima of every station with at least one
/// complete year.
BlockMaxSeries pooled_yearly_maxima(const std::vector<StationSeries>& stations);

std::chrono::year_month_day parse_iso_date(const std::string& text);
std::string format_iso_date(std::chrono::year_month_day d);

}  // namespace kevt
