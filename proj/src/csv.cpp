#include "wardtrans/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wardtrans/types.hpp"

namespace wardtrans {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(f.begin());
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.pop_back();
  }
  return out;
}

}  // namespace

std::size_t CsvTable::col(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw ValidationError(path + ": missing required column '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv_text(const std::string& text, const std::string& name) {
  CsvTable table;
  table.path = name;
  std::istringstream in(text);
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (!saw_header) {
      table.header = split_fields(line);
      saw_header = true;
      continue;
    }
    if (line.empty() || line == "\r") continue;
    auto fields = split_fields(line);
    if (fields.size() != table.header.size()) {
      throw ValidationError(name + ":" + std::to_string(table.rows.size() + 2) +
                            ": expected " + std::to_string(table.header.size()) +
                            " fields, got " + std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!saw_header) {
    throw ValidationError(name + ": empty file (header row required)");
  }
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_text(buf.str(), path);
}

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

AtomicFileWriter::AtomicFileWriter(const std::filesystem::path& path)
    : path_(path) {}

AtomicFileWriter::~AtomicFileWriter() {
  if (!closed_) {
    try {
      close();
    } catch (...) {
    }
  }
}

void AtomicFileWriter::close() {
  if (closed_) return;
  closed_ = true;
  write_file_atomic(path_, buffer_);
  buffer_.clear();
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace wardtrans
