#include "nonbloch/cli.hpp"

int main(int argc, char** argv) { return nonbloch::run(argc, argv); }
