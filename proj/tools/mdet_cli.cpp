#include <cstdio>

int main() {
    std::fprintf(stderr, "mdet: no commands wired up yet\n");
    return 2;
}
