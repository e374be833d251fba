#include "qcd/cli/app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    qcd::cli::Application app;
    return app.run(args, std::cout, std::cerr, argv[0]);
}
