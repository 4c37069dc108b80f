#pragma once

namespace textvqa::cli {

// Exit codes: 0 success, 1 usage error, 2 runtime failure.
int cli_main(int argc, const char* const* argv);

}  // namespace textvqa::cli
