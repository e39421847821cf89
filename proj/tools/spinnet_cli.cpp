#include "spinnet/cli.hpp"

int main(int argc, char** argv) { return spinnet::cli::run(argc, argv); }
