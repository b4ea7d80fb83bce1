// Acceptance suite: one pass/fail line per criterion, exit nonzero on failure.
#include <cstdio>

#include "hopfvar/verify.hpp"

int main() {
    hopfvar::VerifyConfig cfg;
    const auto results = hopfvar::run_suite("all", cfg);
    bool all = true;
    for (const auto& c : results) {
        std::printf("%-4s  %-34s  %s  margin=%+.3e  (%.2fs)\n", c.id.c_str(), c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.margin, c.runtime_seconds);
        all = all && c.pass;
    }
    std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILURES present");
    return all ? 0 : 1;
}
