#include "itf/cli.hpp"

int main(int argc, char** argv) { return itf::run(argc, argv); }
