// Acceptance suite: runs the ten verification criteria at full sample counts
// and reports one pass/fail line per criterion.

#include <cstring>
#include <iostream>

#include "fracorder/verify.hpp"

int main(int argc, char** argv) {
    fracorder::verify::VerifyOptions options;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--fracorder") == 0 && i + 1 < argc)
            options.fracorder_exe = argv[++i];
        else if (std::strcmp(argv[i], "--quick") == 0)
            options.quick = true;
    }
    const auto results = fracorder::verify::run_criteria(std::cout, options);
    int failures = 0;
    for (const auto& r : results)
        if (!r.pass) ++failures;
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all " << results.size() << " criteria passed\n";
    return 0;
}
