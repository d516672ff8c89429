#pragma once

// soergel-kit command line: homfly, hhh and verify.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "soergel/invariants.hpp"

namespace soergel::cli {

enum ExitCode : int { kPass = 0, kCellFailure = 1, kUsage = 2, kInternal = 3 };

inline constexpr const char* kSchema = "soergel-kit/1";

struct Config {
  int n = 1;
  std::string braid;
  int cutoff = 14;
  std::string field = "q";
  int threads = 1;
  std::string cache_dir;
  std::string format = "json";
  bool normalized = false;
  bool recheck_q = false;

  // D even and >= 0, prime valid, threads >= 1; throws Error
  void validate() const;
  SliceRequest request() const;
};

nlohmann::ordered_json conventions_json();
nlohmann::ordered_json table_json(const PoincareTable& t);
nlohmann::ordered_json comparison_json(const Comparison& c);
nlohmann::ordered_json report_json(const CheckReport& r);

const std::vector<std::string>& check_names();

// full argv including the program name; all output goes to out / err
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace soergel::cli
