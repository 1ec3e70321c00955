#include "toral/cli.hpp"

int main(int argc, char** argv) { return toral::run(argc, argv); }
