#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace layoutjudge {

/// Command-line entry point. args excludes the program name. Returns 0 on
/// success, 1 on usage errors (usage goes to err) and 2 on data errors, which
/// are reported on err as "error[<Code>]: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace layoutjudge
