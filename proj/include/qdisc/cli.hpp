#ifndef QDISC_CLI_HPP
#define QDISC_CLI_HPP

#include <ostream>
#include <string>
#include <string_view>

#include "qdisc/oracle.hpp"

namespace qdisc {

inline constexpr std::string_view kToolName = "qdisc";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid = 1;
inline constexpr int verification_failed = 2;
}  // namespace exit_code

// Probe literals: |0>, |1>, |+>, |->, single(s,phase) for
// sqrt(1-s)|0> + e^{i phase} sqrt(s)|1>, and schmidt(s,phase) for the same
// amplitudes on |00> and |11>. Throws ParseError.
Probe parse_probe(std::string_view literal);

// Runs one command line (argv[0] is the program name). JSON and CSV go to
// `out` unless --out names a file; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdisc

#endif  // QDISC_CLI_HPP
