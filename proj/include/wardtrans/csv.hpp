#ifndef WARDTRANS_CSV_HPP
#define WARDTRANS_CSV_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wardtrans {

/// A parsed comma-delimited file: header plus raw string rows.
/// Fields may not contain commas; this is enough for the ward file formats.
struct CsvTable {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // rows[i] is file line i+2

  // Column index by name; throws std::runtime_error if absent.
  std::size_t col(const std::string& name) const;
  // 1-based file line of data row i, for diagnostics.
  long line_of(std::size_t row) const { return static_cast<long>(row) + 2; }
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv_text(const std::string& text, const std::string& name);

// Shortest decimal representation that round-trips the double.
std::string format_double(double v);

/// Buffered writer that lands atomically (temp file + rename on close).
class AtomicFileWriter {
 public:
  explicit AtomicFileWriter(const std::filesystem::path& path);
  ~AtomicFileWriter();
  void write(const std::string& text) { buffer_ += text; }
  void write_line(const std::string& text) { buffer_ += text; buffer_ += '\n'; }
  void close();  // flush + rename; throws on I/O failure

 private:
  std::filesystem::path path_;
  std::string buffer_;
  bool closed_ = false;
};

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace wardtrans

#endif
