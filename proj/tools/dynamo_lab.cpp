#include "dynamo/cli.hpp"

int main(int argc, char** argv) { return dynamo::cli::run(argc, argv); }
