#include "layoutjudge/cli.hpp"

int main(int argc, char** argv) { return layoutjudge::run(argc, argv); }
