#include "hyplayer/cli.hpp"

int main(int argc, char** argv) { return hyplayer::run_cli(argc, argv); }
