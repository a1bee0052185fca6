#include <cstdio>
#include <cstdlib>
#include <string>

#include "pretlab/acceptance.hpp"

// One line per criterion; exit status is the number of failures (capped).
int main(int argc, char** argv) {
    pretlab::acceptance::Options opt;
    if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);
    int failed = 0;
    for (int id = 1; id <= pretlab::acceptance::kCriteria; ++id) {
        auto o = pretlab::acceptance::run_criterion(id, opt);
        std::printf("%s\n", pretlab::acceptance::format_line(o).c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d/%d criteria passed\n", pretlab::acceptance::kCriteria - failed,
                pretlab::acceptance::kCriteria);
    return failed == 0 ? 0 : 1;
}
