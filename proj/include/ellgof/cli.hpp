#pragma once

namespace ellgof {

/// Entry point behind the command-line tool. Exit codes: 0 success,
/// 1 usage/configuration error, 2 data error, 3 numeric failure.
int cli_main(int argc, const char* const* argv);

}  // namespace ellgof
