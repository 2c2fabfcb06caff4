#include <doctest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include "kevt/error.hpp"
#include "kevt/station.hpp"

using namespace kevt;
using namespace std::chrono;

namespace {

// Daily rows for the given station over whole calendar years.
void daily_rows(std::ostream& os, const std::string& id, int y0, int y1, double scale) {
  for (sys_days d = sys_days{year{y0} / January / 1}; d < sys_days{year{y1 + 1} / January / 1};
       d += days{1}) {
    const auto n = d.time_since_epoch().count();
    os << id << ',' << format_iso_date(year_month_day{d}) << ',' << scale * std::fmod(n * 0.618, 1.0)
       << '\n';
  }
}

}  // namespace

TEST_CASE("dates") {
  const auto d = parse_iso_date("2020-02-29");
  CHECK(d == year{2020} / February / 29);
  CHECK(format_iso_date(d) == "2020-02-29");
  CHECK_THROWS_AS(parse_iso_date("2021-02-29"), DataError);
  CHECK_THROWS_AS(parse_iso_date("2021-2-3"), DataError);
  CHECK_THROWS_AS(parse_iso_date("yesterday"), DataError);
}

TEST_CASE("gaps are filled by linear interpolation") {
  std::istringstream in(
      "station,date,value\n"
      "A,2000-01-01,1.0\n"
      "A,2000-01-02,NA\n"
      "A,2000-01-03,3.0\n");
  const auto r = ingest_csv(in);
  REQUIRE(r.stations.size() == 1);
  const auto& s = r.stations[0];
  CHECK(s.missing_filled == 1);
  CHECK(s.values[1] == doctest::Approx(2.0));
  CHECK(s.flagged);  // 1 of 3 rows missing
  CHECK(r.rejects.empty());
}

TEST_CASE("interpolation weights by calendar distance") {
  std::istringstream in(
      "station,date,value\n"
      "A,2000-01-01,0\n"
      "A,2000-01-02,\n"
      "A,2000-01-05,4\n"
      "A,2000-01-06,-999\n");
  const auto s = ingest_csv(in).stations.at(0);
  CHECK(s.values[1] == doctest::Approx(1.0));
  CHECK(s.values[3] == doctest::Approx(4.0));
  CHECK(s.missing_filled == 2);
}

TEST_CASE("rows are sorted and stations separated") {
  std::istringstream in(
      "value,station,date\n"
      "3,B,2001-03-02\n"
      "7,A,2001-03-03\n"
      "1,B,2001-03-01\n"
      "5,A,2001-03-01\n"
      "2,B,2001-03-03\n");
  const auto r = ingest_csv(in);
  REQUIRE(r.stations.size() == 2);
  CHECK(r.stations[0].station_id == "B");
  CHECK(r.stations[0].values == std::vector<double>{1, 3, 2});
  CHECK(r.stations[1].station_id == "A");
  CHECK(r.stations[1].values == std::vector<double>{5, 7});
  CHECK(r.stations[1].dates.front() == year{2001} / March / 1);
}

TEST_CASE("bad rows are reported, not fatal") {
  std::istringstream in(
      "station,date,value\n"
      "A,2000-01-01,1\n"
      "A,not-a-date,2\n"
      "A,2000-01-02,abc\n"
      "A\n"
      "A,2000-01-01,5\n"
      "A,2000-01-03,\"3\"\n");
  const auto r = ingest_csv(in);
  CHECK(r.rejects.size() == 4);
  REQUIRE(r.stations.size() == 1);
  CHECK(r.stations[0].values == std::vector<double>{1, 3});
}

TEST_CASE("custom schema and header errors") {
  std::istringstream in("id;x\n");
  CHECK_THROWS_AS(ingest_csv(in), DataError);
  std::istringstream in2(
      "STAT,DAY,RAIN\n"
      "S1,2010-06-01,4.5\n");
  const auto r = ingest_csv(in2, CsvSchema{"STAT", "DAY", "RAIN"});
  CHECK(r.stations.at(0).values.at(0) == 4.5);
  std::istringstream empty("");
  CHECK_THROWS_AS(ingest_csv(empty), DataError);
  CHECK_THROWS_AS(ingest_csv(std::string("/nonexistent/file.csv")), DataError);
}

TEST_CASE("yearly maxima follow the calendar") {
  std::ostringstream os;
  os << "station,date,value\n";
  daily_rows(os, "A", 2003, 2004, 1.0);  // 2004 is a leap year
  os << "A,2005-01-01,99\n";             // incomplete trailing year
  std::istringstream in(os.str());
  const auto r = ingest_csv(in);
  const auto& s = r.stations.at(0);
  CHECK(s.values.size() == 365 + 366 + 1);
  const auto b = yearly_block_maxima(s);
  CHECK(b.maxima.size() == 2);
  CHECK(b.source_label == "A");
  for (double m : b.maxima) CHECK(m < 1.0);

  // drop Feb 29: the leap year is no longer complete
  std::string text = os.str();
  const auto pos = text.find("A,2004-02-29");
  text.erase(pos, text.find('\n', pos) - pos + 1);
  std::istringstream in2(text);
  CHECK(yearly_block_maxima(ingest_csv(in2).stations.at(0)).maxima.size() == 1);
}

TEST_CASE("pooled maxima concatenate stations") {
  std::ostringstream os;
  os << "station,date,value\n";
  daily_rows(os, "A", 2001, 2003, 1.0);
  daily_rows(os, "B", 2001, 2003, 2.0);
  os << "C,2001-01-01,1\n";
  std::istringstream in(os.str());
  const auto r = ingest_csv(in);
  const auto pooled = pooled_yearly_maxima(r.stations);
  CHECK(pooled.maxima.size() == 6);
  CHECK(pooled.source_label == "pooled:2");
  CHECK_THROWS_AS(yearly_block_maxima(r.stations.at(2)), InsufficientData);
  CHECK_THROWS_AS(pooled_yearly_maxima({r.stations.at(2)}), InsufficientData);
}
