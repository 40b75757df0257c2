#include "kwcl/cli/commands.hpp"

int main(int argc, char** argv) {
    return kwcl::cli::run_cli(argc, argv);
}
