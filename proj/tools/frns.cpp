#include "frns/cli.hpp"

int main(int argc, char** argv)
{
    return frns::cli::run(argc, argv);
}
