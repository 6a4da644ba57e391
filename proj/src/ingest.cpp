#include "wardtrans/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "wardtrans/dates.hpp"

namespace wardtrans {

namespace {

[[noreturn]] void row_error(const std::string& file, long line,
                            const std::string& what) {
  throw ValidationError(file + ":" + std::to_string(line) + ": " + what);
}

long parse_date_field(const CsvTable& table, std::size_t row, std::size_t col) {
  try {
    return parse_iso_date(table.rows[row][col]);
  } catch (const std::invalid_argument& err) {
    row_error(table.path, table.line_of(row), err.what());
  }
}

std::string checked_id(const CsvTable& table, std::size_t row, std::size_t col) {
  const std::string& id = table.rows[row][col];
  if (id.empty()) row_error(table.path, table.line_of(row), "empty identifier");
  if (id.find('#') != std::string::npos) {
    row_error(table.path, table.line_of(row),
              "identifier may not contain '#': '" + id + "'");
  }
  return id;
}

}  // namespace

std::vector<std::string> RawEventTable::ward_ids() const {
  std::set<std::string> ids;
  for (const auto& a : admissions) ids.insert(a.ward);
  return {ids.begin(), ids.end()};
}

RawEventTable parse_ward_tables(const CsvTable& admissions,
                                const CsvTable& tests,
                                const CsvTable& precautions) {
  RawEventTable out;

  {
    const auto c_person = admissions.col("person_id");
    const auto c_ward = admissions.col("ward_id");
    const auto c_admit = admissions.col("admit_date");
    const auto c_discharge = admissions.col("discharge_date");
    for (std::size_t i = 0; i < admissions.rows.size(); ++i) {
      RawEventTable::AdmissionRow row;
      row.person = checked_id(admissions, i, c_person);
      row.ward = checked_id(admissions, i, c_ward);
      row.admit = parse_date_field(admissions, i, c_admit);
      row.discharge = parse_date_field(admissions, i, c_discharge);
      row.line = admissions.line_of(i);
      if (row.discharge <= row.admit) {
        row_error(admissions.path, row.line,
                  "discharge must come after admission");
      }
      out.admissions.push_back(std::move(row));
    }
  }

  // Admissions indexed by (person, ward) for coverage checks.
  std::map<std::pair<std::string, std::string>,
           std::vector<const RawEventTable::AdmissionRow*>>
      stays;
  for (const auto& a : out.admissions) {
    stays[{a.person, a.ward}].push_back(&a);
  }

  {
    const auto c_person = tests.col("person_id");
    const auto c_ward = tests.col("ward_id");
    const auto c_date = tests.col("date");
    const auto c_result = tests.col("result");
    for (std::size_t i = 0; i < tests.rows.size(); ++i) {
      RawEventTable::TestRow row;
      row.person = checked_id(tests, i, c_person);
      row.ward = checked_id(tests, i, c_ward);
      row.day = parse_date_field(tests, i, c_date);
      row.line = tests.line_of(i);
      const std::string& result = tests.rows[i][c_result];
      if (result == "pos") {
        row.positive = true;
      } else if (result == "neg") {
        row.positive = false;
      } else {
        row_error(tests.path, row.line,
                  "unknown result code '" + result + "' (expected pos or neg)");
      }
      auto it = stays.find({row.person, row.ward});
      const bool covered =
          it != stays.end() &&
          std::any_of(it->second.begin(), it->second.end(), [&](const auto* a) {
            return a->admit <= row.day && row.day <= a->discharge;
          });
      if (!covered) {
        row_error(tests.path, row.line,
                  "test for '" + row.person + "' on " + format_iso_date(row.day) +
                      " is not covered by any admission in ward '" + row.ward + "'");
      }
      out.tests.push_back(std::move(row));
    }
  }

  {
    const auto c_person = precautions.col("person_id");
    const auto c_ward = precautions.col("ward_id");
    const auto c_start = precautions.col("start_date");
    const auto c_end = precautions.col("end_date");
    for (std::size_t i = 0; i < precautions.rows.size(); ++i) {
      RawEventTable::PrecautionRow row;
      row.person = checked_id(precautions, i, c_person);
      row.ward = checked_id(precautions, i, c_ward);
      row.start = parse_date_field(precautions, i, c_start);
      row.end = parse_date_field(precautions, i, c_end);
      row.line = precautions.line_of(i);
      if (row.end <= row.start) {
        row_error(precautions.path, row.line,
                  "end_date (exclusive) must come after start_date");
      }
      auto it = stays.find({row.person, row.ward});
      const bool covered =
          it != stays.end() &&
          std::any_of(it->second.begin(), it->second.end(), [&](const auto* a) {
            return a->admit <= row.start && row.start < a->discharge;
          });
      if (!covered) {
        row_error(precautions.path, row.line,
                  "precaution start for '" + row.person +
                      "' is not covered by any admission in ward '" + row.ward + "'");
      }
      out.precautions.push_back(std::move(row));
    }
  }

  return out;
}

RawEventTable parse_ward_files(const std::string& admissions_path,
                               const std::string& tests_path,
                               const std::string& precautions_path) {
  return parse_ward_tables(read_csv(admissions_path), read_csv(tests_path),
                           read_csv(precautions_path));
}

WardData build_ward_data(const RawEventTable& table, const std::string& ward_id,
                         long study_start, long study_end,
                         double readmission_window) {
  if (study_end <= study_start) {
    throw ValidationError("study end must come after study start");
  }
  const double t_end = static_cast<double>(study_end - study_start);

  // Classification sees every admission in the table so that positive tests
  // carried over from another ward still mark a re-admission.
  std::vector<RawEpisode> raw(table.admissions.size());
  for (std::size_t i = 0; i < table.admissions.size(); ++i) {
    const auto& a = table.admissions[i];
    raw[i].person_id = a.person;
    raw[i].ward_id = a.ward;
    raw[i].admit = static_cast<double>(a.admit);
    raw[i].discharge = static_cast<double>(a.discharge);
  }
  // A test on a day shared by two stays of one person (discharge day of one,
  // admission day of the next) belongs to the stay it closes.
  auto covered_by_earlier = [&](const RawEventTable::AdmissionRow& a, long day) {
    for (const auto& b : table.admissions) {
      if (&b == &a) continue;
      if (b.person == a.person && b.ward == a.ward && b.admit < a.admit &&
          b.admit <= day && day <= b.discharge) {
        return true;
      }
    }
    return false;
  };

  for (const auto& t : table.tests) {
    if (!t.positive) continue;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto& a = table.admissions[i];
      if (a.person == t.person && a.ward == t.ward && a.admit <= t.day &&
          t.day <= a.discharge && !covered_by_earlier(a, t.day)) {
        raw[i].positive_test_times.push_back(static_cast<double>(t.day));
        break;
      }
    }
  }
  const auto classes = classify_admissions(raw, readmission_window);

  WardData ward;
  ward.ward_id = ward_id;
  ward.study_length = t_end;
  ward.readmission_window = readmission_window;

  // Per-person readmission ordinal, assigned in admission order within the
  // ward so that serialized episode ids survive a round trip.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < table.admissions.size(); ++i) {
    if (table.admissions[i].ward == ward_id) order.push_back(i);
  }
  if (order.empty()) {
    throw ValidationError("ward '" + ward_id + "': no admissions");
  }
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (table.admissions[x].admit != table.admissions[y].admit) {
      return table.admissions[x].admit < table.admissions[y].admit;
    }
    return table.admissions[x].person < table.admissions[y].person;
  });

  std::map<std::string, int> ordinal;
  for (std::size_t i : order) {
    const auto& a = table.admissions[i];
    const int k = ++ordinal[a.person];
    const double admit = std::max(0.0, static_cast<double>(a.admit - study_start));
    const double discharge =
        std::min(t_end, static_cast<double>(a.discharge - study_start));
    if (!(admit < discharge)) continue;  // no overlap with the study window

    PatientEpisode ep;
    ep.episode_id = a.person + "#" + std::to_string(k);
    ep.admit = admit;
    ep.discharge = discharge;
    ep.admission_class = classes[i];

    for (const auto& t : table.tests) {
      if (t.person != a.person || t.ward != a.ward) continue;
      if (!(a.admit <= t.day && t.day <= a.discharge)) continue;
      if (covered_by_earlier(a, t.day)) continue;
      const double when = static_cast<double>(t.day - study_start);
      if (when < ep.admit || when > ep.discharge) continue;  // truncated away
      ep.tests.push_back({when, t.positive});
    }

    for (const auto& pr : table.precautions) {
      if (pr.person != a.person || pr.ward != a.ward) continue;
      if (!(a.admit <= pr.start && pr.start < a.discharge)) continue;
      Interval iv{std::max(ep.admit, static_cast<double>(pr.start - study_start)),
                  std::min(ep.discharge, static_cast<double>(pr.end - study_start))};
      if (iv.start < iv.end) ep.precautions.push_back(iv);
    }
    // Merge any overlapping precaution rows into disjoint intervals.
    std::sort(ep.precautions.begin(), ep.precautions.end(),
              [](const Interval& x, const Interval& y) { return x.start < y.start; });
    std::vector<Interval> merged;
    for (const auto& iv : ep.precautions) {
      if (!merged.empty() && iv.start <= merged.back().end) {
        merged.back().end = std::max(merged.back().end, iv.end);
      } else {
        merged.push_back(iv);
      }
    }
    ep.precautions = std::move(merged);

    ward.episodes.push_back(std::move(ep));
  }

  if (ward.episodes.empty()) {
    throw ValidationError("ward '" + ward_id +
                          "': no episodes overlap the study window");
  }
  ward.finalize();
  return ward;
}

SerializedWard serialize_ward(const WardData& ward, long study_start) {
  auto day_of = [&](double t, const std::string& what) {
    const double rounded = std::round(t);
    if (std::fabs(rounded - t) > 1e-9) {
      throw ValidationError("serialize_ward: " + what + " at non-integer day " +
                            format_double(t));
    }
    return study_start + static_cast<long>(rounded);
  };
  auto person_of = [](const std::string& episode_id) {
    return episode_id.substr(0, episode_id.find('#'));
  };

  SerializedWard out;
  out.admissions_csv = "person_id,ward_id,admit_date,discharge_date\n";
  out.tests_csv = "person_id,ward_id,date,result\n";
  out.precautions_csv = "person_id,ward_id,start_date,end_date\n";
  for (const auto& ep : ward.episodes) {
    const std::string person = person_of(ep.episode_id);
    out.admissions_csv += person + "," + ward.ward_id + "," +
                          format_iso_date(day_of(ep.admit, "admission")) + "," +
                          format_iso_date(day_of(ep.discharge, "discharge")) + "\n";
    for (const auto& t : ep.tests) {
      out.tests_csv += person + "," + ward.ward_id + "," +
                       format_iso_date(day_of(t.time, "test")) + "," +
                       (t.positive ? "pos" : "neg") + "\n";
    }
    for (const auto& iv : ep.precautions) {
      out.precautions_csv += person + "," + ward.ward_id + "," +
                             format_iso_date(day_of(iv.start, "precaution start")) +
                             "," +
                             format_iso_date(day_of(iv.end, "precaution end")) + "\n";
    }
  }
  return out;
}

std::string serialize_truth(const WardData& ward, const Augmentation& truth) {
  std::string out = "episode_id,colonization_time\n";
  for (std::size_t j = 0; j < ward.size(); ++j) {
    out += ward.episodes[j].episode_id;
    out += ',';
    out += truth.is_colonized(j) ? format_double(truth.col_time(j)) : "none";
    out += '\n';
  }
  return out;
}

}  // namespace wardtrans
