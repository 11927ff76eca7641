#include "grafield/cli.hpp"

int main(int argc, char** argv) { return grafield::cli::run(argc, argv); }
