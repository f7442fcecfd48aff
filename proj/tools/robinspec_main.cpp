#include "robin/cli.hpp"

#include "acceptance/acceptance.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return robin::cli::main_entry(
        argc, argv,
        [](int criterion, std::ostream& out) { return robin::acceptance::run(criterion, out); },
        std::cout, std::cerr);
}
