#include "qrabi/cli.hpp"

int main(int argc, char** argv) { return qrabi::cli::run_cli(argc, argv); }
