#ifndef LOCCONVEX_CLI_HPP
#define LOCCONVEX_CLI_HPP

namespace locconvex {

int run_cli(int argc, const char* const* argv);

}  // namespace locconvex

#endif
