#pragma once

// Self-contained property suites behind `permrelax verify <suite>`.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "permrelax/error.hpp"

namespace permrelax {

struct PropertyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<PropertyCheck> checks;

    bool passed() const;
};

/// theorem1, theorem2, gradients, sinkhorn, rounding
const std::vector<std::string>& verify_suite_names();

/// Throws UnknownSuite for names outside verify_suite_names().
SuiteReport run_verify_suite(std::string_view suite, std::uint64_t seed = 0);

class UnknownSuite : public Error {
public:
    explicit UnknownSuite(const std::string& name);
};

/// One "PASS name: detail" / "FAIL name: detail" line per check.
void print_report(std::ostream& out, const SuiteReport& report);

}  // namespace permrelax
