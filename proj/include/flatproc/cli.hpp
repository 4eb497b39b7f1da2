#pragma once

namespace flatproc::cli {

// Exit codes: 0 success, 1 usage or precondition error, 2 statistical acceptance failure.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kAcceptanceFailed = 2;

int run(int argc, char** argv);

}  // namespace flatproc::cli
