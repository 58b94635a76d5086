#pragma once

namespace eprsim {

enum class ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfig = 2,
  kProtocol = 3,
  kVerification = 4,
  kIo = 5,
};

inline int exit_value(ExitCode c) { return static_cast<int>(c); }

}  // namespace eprsim
