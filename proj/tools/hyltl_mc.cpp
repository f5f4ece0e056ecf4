#include "hyltl/cli.hpp"

#include <iostream>

int main( int argc, char** argv )
{
  return hyltl::run_cli( argc, argv, std::cout, std::cerr );
}
