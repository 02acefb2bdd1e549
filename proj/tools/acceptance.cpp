#include <cstring>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "checks.hpp"

using namespace ising::checks;

int main(int argc, char** argv) {
    bool as_json = argc > 1 && std::strcmp(argv[1], "--json") == 0;
    const std::vector<std::string> criteria{"partition", "correlations", "factorization", "cancellation",
                                            "constants", "telescoping", "scaling", "universality"};
    CheckOptions o;
    nlohmann::json all = nlohmann::json::array();
    int failed = 0;
    for (const auto& name : criteria) {
        CheckResult r;
        try {
            r = run_check(name, o);
        } catch (const std::exception& e) {
            r.name = name;
            r.pass = false;
            r.summary = std::string("error: ") + e.what();
        }
        failed += !r.pass;
        std::cout << "criterion " << r.id << " " << (r.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(34)
                  << r.name << std::right << std::fixed << std::setprecision(1) << std::setw(6) << r.seconds << "s  "
                  << r.summary << std::endl;
        std::cout.unsetf(std::ios::fixed);
        all.push_back(to_json(r, true));
    }
    if (as_json) std::cerr << all.dump(2) << "\n";
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
    return failed == 0 ? 0 : 1;
}
