#include "battsched/cli.hpp"

int main(int argc, char** argv) { return battsched::cli_main(argc, argv); }
