// Placeholder; the full acceptance suite lands after the unit tests pass.
#include <cstdio>
int main() {
    std::puts("acceptance suite not yet implemented");
    return 1;
}
