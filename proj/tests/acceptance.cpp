// One line per acceptance criterion; the exit status is nonzero if any fails.
#include "laxkit/acceptance.hpp"

#include <cstdio>

int main() {
    const auto results = laxkit::run_acceptance({});
    int failed = 0;
    for (const auto& r : results) {
        std::printf("%s\n", laxkit::format_result(r).c_str());
        failed += !r.pass;
    }
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
}
