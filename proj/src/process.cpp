// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxroute/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>

namespace voxroute {

namespace {

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void close_fd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          std::chrono::milliseconds timeout) {
  ProcessResult result;
  if (argv.empty() || argv.front().empty()) {
    result.error = "empty command";
    return result;
  }
  ignore_sigpipe_once();

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    result.error = std::strerror(errno);
    return result;
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    result.error = std::strerror(errno);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    return result;
  }
  // exec failure is reported through this pipe; it closes on successful exec.
  int err_pipe[2];
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    result.error = std::strerror(errno);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    return result;
  }

  std::vector<char*> args;
  args.reserve(argv.size() + 1);
  for (const auto& a : argv) {
    args.push_back(const_cast<char*>(a.c_str()));
  }
  args.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) {
    result.error = std::strerror(errno);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
    return result;
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execvp(args[0], args.data());
    const int e = errno;
    [[maybe_unused]] auto n = ::write(err_pipe[1], &e, sizeof(e));
    ::_exit(127);
  }

  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  int to_child = in_pipe[1];
  int from_child = out_pipe[0];

  int exec_errno = 0;
  if (::read(err_pipe[0], &exec_errno, sizeof(exec_errno)) == sizeof(exec_errno)) {
    ::close(err_pipe[0]);
    close_fd(to_child);
    close_fd(from_child);
    ::waitpid(pid, nullptr, 0);
    result.error = std::string("cannot execute ") + argv.front() + ": " + std::strerror(exec_errno);
    return result;
  }
  ::close(err_pipe[0]);
  result.spawned = true;

  ::fcntl(to_child, F_SETFL, O_NONBLOCK);
  ::fcntl(from_child, F_SETFL, O_NONBLOCK);
  if (input.empty()) {
    close_fd(to_child);
  }

  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::size_t written = 0;
  char buf[4096];
  while (from_child >= 0) {
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      result.timed_out = true;
      break;
    }
    pollfd fds[2];
    nfds_t nfds = 0;
    fds[nfds++] = {from_child, POLLIN, 0};
    if (to_child >= 0) {
      fds[nfds++] = {to_child, POLLOUT, 0};
    }
    const int rc = ::poll(fds, nfds, static_cast<int>(remaining.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      result.error = std::strerror(errno);
      break;
    }
    if (nfds == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t n = ::write(to_child, input.data() + written, input.size() - written);
      if (n > 0) {
        written += static_cast<std::size_t>(n);
      }
      if (n < 0 && errno != EAGAIN && errno != EINTR) {
        close_fd(to_child);  // child closed stdin early
      } else if (written == input.size()) {
        close_fd(to_child);
      }
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      const ssize_t n = ::read(from_child, buf, sizeof(buf));
      if (n > 0) {
        result.stdout_text.append(buf, static_cast<std::size_t>(n));
      } else if (n == 0) {
        close_fd(from_child);
      } else if (errno != EAGAIN && errno != EINTR) {
        result.error = std::strerror(errno);
        close_fd(from_child);
      }
    }
  }
  close_fd(to_child);
  close_fd(from_child);

  int status = 0;
  if (result.timed_out) {
    ::kill(pid, SIGKILL);
    ::waitpid(pid, &status, 0);
    return result;
  }
  // stdout hit EOF; the child may still be running, bound the wait too.
  while (true) {
    const pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) {
      result.error = std::strerror(errno);
      return result;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      result.timed_out = true;
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      return result;
    }
    ::usleep(1000);
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.term_signal = WTERMSIG(status);
  }
  return result;
}

std::string describe_failure(const ProcessResult& r) {
  if (!r.spawned) {
    return r.error.empty() ? "process could not be started" : r.error;
  }
  if (r.timed_out) {
    return "process timed out";
  }
  if (r.term_signal != 0) {
    return "process killed by signal " + std::to_string(r.term_signal);
  }
  if (r.exit_code != 0) {
    return "process exited " + std::to_string(r.exit_code);
  }
  return r.error;
}

}  // namespace voxroute
