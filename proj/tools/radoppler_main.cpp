#include "radoppler/cli.hpp"

int main(int argc, char** argv) { return radoppler::run_cli(argc, argv); }
