#include "clickbait/cli.hpp"

int main(int argc, char** argv) { return clickbait::cli::run(argc, argv); }
