#include "cli.hpp"

int main(int argc, char** argv) { return procnet::cli::dispatch(argc, argv); }
