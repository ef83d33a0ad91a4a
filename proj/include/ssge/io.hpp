#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "ssge/kernel.hpp"

namespace ssge {

// 17-significant-digit decimal form, round-trip exact for 64-bit floats.
std::string format_double(double value);

// Sample CSV: header "x1,...,xd", one sample per row, LF line endings.
std::string samples_to_csv(const SampleMatrix& samples);
SampleMatrix samples_from_csv_text(const std::string& text);
SampleMatrix read_samples_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Minimal deterministic JSON writer: insertion-ordered keys, doubles
// serialized with format_double.
class JsonWriter {
public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(long long v);
  JsonWriter& value(unsigned long long v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& value(const Eigen::VectorXd& v);
  JsonWriter& begin_array();
  JsonWriter& end_array();

  std::string str() const { return out_; }

private:
  void separate();
  std::string out_;
  std::vector<bool> first_in_scope_;
  bool pending_key_ = false;
};

}  // namespace ssge
