#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "justec/corpus.hpp"

namespace justec::suite {

constexpr int kCriteria = 10;

struct CriterionResult {
    int id = 0;
    bool pass = false;
    long long millis = 0;
    long long time_limit_ms = 0;
    int cases = 0;
    int failures = 0;
    std::string detail;
};

struct SuiteOptions {
    std::uint64_t seed = corpus::kDefaultSeed;
};

// Runs the listed criteria (all of them when empty) in ascending order.
// Criterion 10 reads the structural checks made while running 4 to 7 and
// runs those first when they were not requested.
std::vector<CriterionResult> run_suite(const SuiteOptions& opts, std::vector<int> which = {});

// `C<id> pass|fail <millis>`
std::string report_line(const CriterionResult& r);

const char* criterion_title(int id);

}  // namespace justec::suite
