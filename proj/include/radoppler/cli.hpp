#pragma once

namespace radoppler {

// Exit status: 0 success, 1 internal error, 2 invalid input or config.
int run_cli(int argc, const char* const* argv);

}  // namespace radoppler
