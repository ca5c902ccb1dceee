#include "krf/cli/commands.hpp"

int main(int argc, char** argv)
{
    return krf::cli::main(argc, argv);
}
