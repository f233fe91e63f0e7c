// Copyright 2026 The memfix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "memfix/process.h"

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "memfix/error.h"

namespace memfix {
namespace {

using Clock = std::chrono::steady_clock;

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() { Close(); }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const { return fd_; }
  void Close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }
  void Reset(int fd) {
    Close();
    fd_ = fd;
  }

 private:
  int fd_ = -1;
};

void MakePipe(Fd& read_end, Fd& write_end) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    throw Error(ErrorCode::kIoError,
                std::string("pipe2 failed: ") + std::strerror(errno));
  }
  read_end.Reset(fds[0]);
  write_end.Reset(fds[1]);
}

}  // namespace

ProcessResult RunProcess(const std::vector<std::string>& argv,
                         const std::filesystem::path& working_dir,
                         std::chrono::milliseconds timeout,
                         std::chrono::milliseconds grace) {
  ProcessResult result;
  if (argv.empty()) throw Error(ErrorCode::kInternal, "empty argv");

  Fd out_read, out_write, err_read, err_write;
  MakePipe(out_read, out_write);
  // Reports exec failure: closed by a successful exec thanks to O_CLOEXEC.
  MakePipe(err_read, err_write);

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  const std::string cwd = working_dir.string();

  const auto start = Clock::now();
  pid_t pid = ::fork();
  if (pid < 0) {
    throw Error(ErrorCode::kIoError,
                std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out_write.get(), STDOUT_FILENO);
    ::dup2(out_write.get(), STDERR_FILENO);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) {
      int e = errno;
      (void)!::write(err_write.get(), &e, sizeof(e));
      ::_exit(127);
    }
    ::execvp(cargv[0], cargv.data());
    int e = errno;
    (void)!::write(err_write.get(), &e, sizeof(e));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  out_write.Close();
  err_write.Close();

  int exec_errno = 0;
  ssize_t n = ::read(err_read.get(), &exec_errno, sizeof(exec_errno));
  if (n == static_cast<ssize_t>(sizeof(exec_errno))) {
    int status = 0;
    ::waitpid(pid, &status, 0);
    result.launched = false;
    result.exec_errno = exec_errno;
    result.wall_seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    return result;
  }
  result.launched = true;

  const auto deadline = start + timeout;
  bool terminated = false;
  Clock::time_point kill_at{};
  char buf[4096];
  bool open = true;
  while (open) {
    auto now = Clock::now();
    if (!terminated && now >= deadline) {
      ::kill(-pid, SIGTERM);
      terminated = true;
      result.timed_out = true;
      kill_at = now + grace;
    }
    if (terminated && now >= kill_at) {
      ::kill(-pid, SIGKILL);
      break;
    }
    auto wait_until = terminated ? kill_at : deadline;
    auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       wait_until - now)
                       .count();
    pollfd pfd{out_read.get(), POLLIN, 0};
    int rc = ::poll(&pfd, 1, static_cast<int>(std::max<long long>(wait_ms, 0) + 1));
    if (rc < 0 && errno != EINTR) break;
    if (rc > 0) {
      ssize_t got = ::read(out_read.get(), buf, sizeof(buf));
      if (got > 0) {
        result.output.append(buf, static_cast<std::size_t>(got));
      } else if (got == 0 || (got < 0 && errno != EINTR && errno != EAGAIN)) {
        open = false;
      }
    }
  }

  int status = 0;
  if (terminated) {
    // The group may still hold the pipe; make sure it is gone.
    if (::waitpid(pid, &status, WNOHANG) == 0) {
      auto limit = Clock::now() + grace;
      while (::waitpid(pid, &status, WNOHANG) == 0) {
        if (Clock::now() >= limit) {
          ::kill(-pid, SIGKILL);
          ::waitpid(pid, &status, 0);
          break;
        }
        ::usleep(10000);
      }
    }
  } else {
    ::waitpid(pid, &status, 0);
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else {
    result.exit_code = -1;
  }
  result.wall_seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace memfix
