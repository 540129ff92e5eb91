#include <iostream>

#include "fpcav/cli.hpp"

int main(int argc, char **argv)
{
    return fpcav::run_command({argv + 1, argv + argc}, std::cout, std::cerr);
}
