// One verdict line per acceptance criterion, with the rows behind it.
#include <algorithm>
#include <cstdlib>
#include <iostream>

#include "fpcav/reproduction.hpp"

int main(int argc, char **argv)
{
    fpcav::ReproductionOptions options;
    if (argc > 1)
        options.monte_carlo_seeds = static_cast<std::size_t>(std::strtoul(argv[1], nullptr, 10));
    const auto outcomes = fpcav::run_reproduction(options);
    std::cout << fpcav::format_reproduction(outcomes);
    const auto passed = std::count_if(outcomes.begin(), outcomes.end(), [](const auto &c) { return c.pass; });
    std::cout << passed << "/" << outcomes.size() << " criteria pass\n";
    return passed == static_cast<long>(outcomes.size()) ? 0 : 1;
}
