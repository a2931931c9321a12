#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kgstab::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kDomain = 3,
  kOracle = 4,
  kBlowUp = 5,
};

/// Runs one subcommand. args excludes the program name. Results go to `out`
/// (or the --out file), one-line errors to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

/// Worker thread cap: hardware concurrency, limited by KGSTAB_THREADS.
unsigned thread_budget();

}  // namespace kgstab::cli
