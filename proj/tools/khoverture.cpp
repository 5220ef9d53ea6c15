#include "khoverture/cli.hpp"

int main(int argc, char** argv) { return khoverture::cli::run(argc, argv); }
