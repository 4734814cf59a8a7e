#include "bvselect/cli.hpp"

int main(int argc, char** argv) { return bvs::cli::run(argc, argv); }
