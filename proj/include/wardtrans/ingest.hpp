#ifndef WARDTRANS_INGEST_HPP
#define WARDTRANS_INGEST_HPP

#include <string>
#include <vector>

#include "wardtrans/csv.hpp"
#include "wardtrans/types.hpp"

namespace wardtrans {

/// Parsed but not yet assembled input rows. Times are days since the civil
/// epoch; rebasing to the study window happens in build_ward_data.
struct RawEventTable {
  struct AdmissionRow {
    std::string person, ward;
    long admit = 0, discharge = 0;
    long line = 0;
  };
  struct TestRow {
    std::string person, ward;
    long day = 0;
    bool positive = false;
    long line = 0;
  };
  struct PrecautionRow {
    std::string person, ward;
    long start = 0, end = 0;
    long line = 0;
  };

  std::vector<AdmissionRow> admissions;
  std::vector<TestRow> tests;
  std::vector<PrecautionRow> precautions;

  std::vector<std::string> ward_ids() const;  // sorted, unique
};

// Reads the three ward files. Every malformed row is reported with its file
// and line; tests and precautions must fall inside an admission of the same
// person and ward.
RawEventTable parse_ward_files(const std::string& admissions_path,
                               const std::string& tests_path,
                               const std::string& precautions_path);

// Same, from in-memory tables (unit tests, round trips).
RawEventTable parse_ward_tables(const CsvTable& admissions,
                                const CsvTable& tests,
                                const CsvTable& precautions);

// Assembles one ward: rebases times to days from the study start, truncates
// stays to [0, T_E], attaches tests and precautions, classifies admissions
// (using positive tests from all wards) and validates the result.
WardData build_ward_data(const RawEventTable& table, const std::string& ward_id,
                         long study_start, long study_end,
                         double readmission_window);

struct SerializedWard {
  std::string admissions_csv;
  std::string tests_csv;
  std::string precautions_csv;
};

// Inverse of ingest for day-granularity wards (all event times whole days);
// parse(serialize(w)) == w. `study_start` fixes the calendar epoch.
SerializedWard serialize_ward(const WardData& ward, long study_start);

std::string serialize_truth(const WardData& ward, const Augmentation& truth);

}  // namespace wardtrans

#endif
