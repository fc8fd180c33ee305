#include <iostream>

int main() {
    std::cout << "chainqed: subcommands pending\n";
    return 0;
}
