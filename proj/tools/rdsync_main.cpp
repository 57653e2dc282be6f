#include "rdsync/cli.hpp"

int main(int argc, char** argv) {
    return rdsync::cli::dispatch(argc, argv);
}
