#include <cstdlib>
#include <iostream>
#include <string>

#include "petallab/acceptance.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = petallab::acceptance::kDefaultSeed;
    if (argc > 1) seed = std::stoull(argv[1]);
    const auto results = petallab::acceptance::run_all(seed);
    petallab::acceptance::print(std::cout, results);
    return petallab::acceptance::all_passed(results) ? EXIT_SUCCESS : EXIT_FAILURE;
}
