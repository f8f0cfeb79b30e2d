#include "circgcn/cli.hpp"

int main(int argc, char** argv) { return circgcn::run_cli(argc, argv); }
