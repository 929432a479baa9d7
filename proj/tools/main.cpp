#include <iostream>

int main() {
    std::cerr << "cli under construction\n";
    return 2;
}
