#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace ising::checks {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string summary;
    nlohmann::json detail;
    double seconds = 0;
};

struct CheckOptions {
    std::uint64_t seed = 20240611;
    int draws = 10;
};

CheckResult partition_oracle(const CheckOptions& o);
CheckResult correlation_oracle(const CheckOptions& o);
CheckResult pfaffian_factorization(const CheckOptions& o);
CheckResult cancellation(const CheckOptions& o);
CheckResult appendix_constants(const CheckOptions& o);
CheckResult telescoping(const CheckOptions& o);
CheckResult scaling_fit(const CheckOptions& o);
CheckResult universality(const CheckOptions& o);

// Clockwise-odd orientation on every cylinder with L, M <= 5.
CheckResult orientation_suite(const CheckOptions& o);

const std::vector<std::string>& check_names();
CheckResult run_check(const std::string& name, const CheckOptions& o);

nlohmann::json to_json(const CheckResult& r, bool with_time);

}  // namespace ising::checks
