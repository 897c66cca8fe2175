#include <iostream>

#include "mvlsw/cli.hpp"

int main(int argc, char** argv) { return mvlsw::cli_dispatch(argc, argv, std::cout, std::cerr); }
