#include "ssge/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ssge/errors.hpp"

namespace ssge {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string samples_to_csv(const SampleMatrix& samples) {
  std::string out;
  const Eigen::Index d = samples.cols();
  for (Eigen::Index c = 0; c < d; ++c) {
    if (c > 0) out += ',';
    out += "x" + std::to_string(c + 1);
  }
  out += '\n';
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      if (c > 0) out += ',';
      out += format_double(samples(r, c));
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

SampleMatrix samples_from_csv_text(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) {
    throw ConfigError("sample csv: empty input");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  const auto d = static_cast<Eigen::Index>(header.size());
  if (d == 0) throw ConfigError("sample csv: empty header");
  for (Eigen::Index c = 0; c < d; ++c) {
    const std::string expected = "x" + std::to_string(c + 1);
    if (header[static_cast<std::size_t>(c)] != expected) {
      throw ConfigError("sample csv: expected header column '" + expected +
                        "', found '" + header[static_cast<std::size_t>(c)] +
                        "'");
    }
  }
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (static_cast<Eigen::Index>(fields.size()) != d) {
      throw ConfigError("sample csv: line " + std::to_string(line_no) +
                        " has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(d));
    }
    std::vector<double> row(static_cast<std::size_t>(d));
    for (Eigen::Index c = 0; c < d; ++c) {
      const std::string& f = fields[static_cast<std::size_t>(c)];
      std::size_t consumed = 0;
      try {
        row[static_cast<std::size_t>(c)] = std::stod(f, &consumed);
      } catch (const std::exception&) {
        throw ConfigError("sample csv: line " + std::to_string(line_no) +
                          ": cannot parse '" + f + "' as a number");
      }
      if (consumed != f.size()) {
        throw ConfigError("sample csv: line " + std::to_string(line_no) +
                          ": trailing characters in '" + f + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("sample csv: no data rows");
  SampleMatrix out(static_cast<Eigen::Index>(rows.size()), d);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      out(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  return out;
}

SampleMatrix read_samples_csv(const std::string& path) {
  return samples_from_csv_text(read_text_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void JsonWriter::separate() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!first_in_scope_.empty()) {
    if (!first_in_scope_.back()) out_ += ',';
    first_in_scope_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ += '{';
  first_in_scope_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  first_in_scope_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
  separate();
  out_ += '"' + name + "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separate();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(unsigned long long v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separate();
  out_ += '"';
  for (char c : v) {
    if (c == '"' || c == '\\') out_ += '\\';
    out_ += c;
  }
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::value(const char* v) { return value(std::string(v)); }

JsonWriter& JsonWriter::value(const Eigen::VectorXd& v) {
  begin_array();
  for (Eigen::Index i = 0; i < v.size(); ++i) value(v[i]);
  return end_array();
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ += '[';
  first_in_scope_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  first_in_scope_.pop_back();
  return *this;
}

}  // namespace ssge
