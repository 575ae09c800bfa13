#include <cstdio>
int main() { std::puts("maval: subcommands not wired up yet"); return 0; }
