#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mate/model.hpp"

namespace mate::io {

/// Malformed input. `line`/`column` are 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class DistanceRounding { Exact, Truncate1, Round2 };

struct WcOptions {
  double dispatch_cost = 2000.0;
  double unit_cost = 1.0;
  DistanceRounding rounding = DistanceRounding::Exact;
};

/// Solomon-style text with delivery and pickup columns. See docs/formats.md.
Instance parse_wc(std::string_view text, const WcOptions& opts = {});
std::string write_wc(const Instance& inst);

/// Versioned JSON document; explicit matrices win over coordinates.
Instance parse_canonical(std::string_view text);
std::string write_canonical(const Instance& inst);

enum class InstanceFormat { Wc, Canonical };

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// For canonical documents the cost coefficients come from the file;
/// `opts` only supplies the rounding mode.
Instance load_instance(const std::filesystem::path& path, InstanceFormat format,
                       const WcOptions& opts = {});

struct SolutionMeta {
  std::optional<std::uint64_t> seed;
  std::string version;
};

struct SolutionFile {
  std::string instance;
  double dispatch_cost = 0.0;
  double unit_cost = 0.0;
  std::vector<std::vector<NodeId>> routes;  // customers only, no depot
  int nv = 0;
  double td = 0.0;
  double tc = 0.0;
  std::optional<std::uint64_t> seed;
  std::string version;

  Solution to_solution() const;
  bool operator==(const SolutionFile&) const = default;
};

std::string write_solution(const Instance& inst, const Solution& s, const SolutionMeta& meta);

/// Rejects duplicate customers, non-positive ids and, when
/// `num_customers >= 0`, ids above it.
SolutionFile read_solution(std::string_view text, int num_customers = -1);

/// Shortest round-trip decimal form of `v`.
std::string format_number(double v);
/// Fixed two decimals.
std::string format_2dp(double v);

}  // namespace mate::io
