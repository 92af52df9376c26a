#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ellgof/samplers.hpp"

namespace ellgof {

/// Parses rectangular numeric CSV text into a Sample. A header row is
/// detected automatically (first row containing a non-numeric cell) and
/// skipped. Ragged rows, non-numeric or non-finite cells, and empty input
/// raise data_error with the offending row and column. `origin` labels the
/// source in error messages.
Sample parse_csv(std::string_view text, const std::string& origin = "<input>");

Sample load_csv(const std::string& path);

void write_csv(const Sample& x, std::ostream& os,
               const std::vector<std::string>& header = {});

void save_csv(const Sample& x, const std::string& path,
              const std::vector<std::string>& header = {});

}  // namespace ellgof
