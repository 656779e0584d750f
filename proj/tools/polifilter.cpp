#include "polifilter/cli.hpp"

int main(int argc, char** argv) { return polifilter::cli::run(argc, argv); }
