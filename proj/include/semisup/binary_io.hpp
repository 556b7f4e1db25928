#pragma once

// Little-endian primitive IO for the dataset and checkpoint containers.

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <vector>

#include "semisup/check.hpp"

namespace semisup::io {

inline void write_u32(std::ostream& os, uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

inline void write_i32(std::ostream& os, int32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

inline void write_u64(std::ostream& os, uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), 8);
}

inline void write_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), 8);
}

inline void write_f64_array(std::ostream& os, const std::vector<double>& v) {
  write_u64(os, v.size());
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(double)));
}

inline uint32_t read_u32(std::istream& is, const char* what) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  check(static_cast<bool>(is), std::string("unexpected end of file reading ") + what);
  return v;
}

inline int32_t read_i32(std::istream& is, const char* what) {
  int32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  check(static_cast<bool>(is), std::string("unexpected end of file reading ") + what);
  return v;
}

inline uint64_t read_u64(std::istream& is, const char* what) {
  uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  check(static_cast<bool>(is), std::string("unexpected end of file reading ") + what);
  return v;
}

inline double read_f64(std::istream& is, const char* what) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  check(static_cast<bool>(is), std::string("unexpected end of file reading ") + what);
  return v;
}

inline std::vector<double> read_f64_array(std::istream& is, const char* what) {
  uint64_t n = read_u64(is, what);
  std::vector<double> v(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  check(static_cast<bool>(is), std::string("unexpected end of file reading ") + what);
  return v;
}

}  // namespace semisup::io
