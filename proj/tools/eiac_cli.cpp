#include "commands.hpp"

int main(int argc, char** argv) { return eiac::cli::run(argc, argv); }
