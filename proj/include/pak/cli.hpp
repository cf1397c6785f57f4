#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pak {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitPrecision = 3;
inline constexpr int kExitViolated = 4;

inline constexpr const char* kSchema = "pak/1";

// args excludes the program name; the report goes to --out or to out
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pak
