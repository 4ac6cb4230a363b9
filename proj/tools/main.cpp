#include "eigenemo/cli.hpp"

int main(int argc, char** argv) { return eigenemo::cli::run(argc, argv); }
