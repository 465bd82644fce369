// Acceptance run: one line per criterion, non-zero exit when any fails.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "justec/suite.hpp"

int main(int argc, char** argv) {
    justec::suite::SuiteOptions opts;
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    bool all = true;
    for (const auto& r : justec::suite::run_suite(opts, which)) {
        std::printf("criterion %2d %s %8lld ms  cases=%d failures=%d  %s | %s\n", r.id, r.pass ? "PASS" : "FAIL",
                    r.millis, r.cases, r.failures, justec::suite::criterion_title(r.id), r.detail.c_str());
        std::fflush(stdout);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
