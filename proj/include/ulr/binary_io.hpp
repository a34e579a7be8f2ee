#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace ulr::binary {

// Little-endian u64 / f64 streams used by all record formats.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void magic(std::string_view tag);
  void u64(std::uint64_t value);
  void f64(double value);
  void f64s(std::span<const double> values);

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string context) : in_(in), context_(std::move(context)) {}
  void expect_magic(std::string_view tag);
  std::uint64_t u64();
  double f64();
  void f64s(std::span<double> values);
  // Bounded u64 used for counts and sizes; rejects absurd values before allocation.
  std::uint64_t count(std::uint64_t limit, std::string_view what);
  void expect_end();

 private:
  void read_raw(char* data, std::size_t size);
  std::istream& in_;
  std::string context_;
};

}  // namespace ulr::binary
